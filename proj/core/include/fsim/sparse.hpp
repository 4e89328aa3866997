#pragma once

#include <memory>
#include <span>
#include <vector>

namespace fsim {

/// Immutable row-compressed sparsity pattern, shared between matrices that
/// reuse it across time steps. Column indices are sorted within each row.
struct CsrPattern {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_ptr; // size rows+1
    std::vector<int> col_idx; // size nnz

    int nnz() const { return static_cast<int>(col_idx.size()); }
    /// Index into the value array of entry (r,c), or -1 if not stored.
    int find(int r, int c) const;
};

struct CsrMatrix {
    std::shared_ptr<const CsrPattern> pattern;
    std::vector<double> values;

    CsrMatrix() = default;
    explicit CsrMatrix(std::shared_ptr<const CsrPattern> p)
        : pattern(std::move(p)), values(pattern->nnz(), 0.0) {}

    int rows() const { return pattern ? pattern->rows : 0; }
    int cols() const { return pattern ? pattern->cols : 0; }
    void set_zero() { std::fill(values.begin(), values.end(), 0.0); }

    double at(int r, int c) const; // 0.0 if entry not stored
    void add(int r, int c, double v); // entry must exist in the pattern
};

/// y = A x
void matvec(const CsrMatrix& A, std::span<const double> x, std::span<double> y);
/// y += s * A x
void matvec_add(const CsrMatrix& A, std::span<const double> x, std::span<double> y, double s = 1.0);

/// Max |A(i,j) - A(j,i)| over stored entries; entries missing a transpose
/// partner count with their own magnitude.
double symmetry_defect(const CsrMatrix& A);

/// Coordinate-format accumulator for one-off assemblies. Duplicate entries sum.
class CsrBuilder {
  public:
    CsrBuilder(int rows, int cols) : rows_(rows), cols_(cols) {}

    void add(int r, int c, double v) { entries_.push_back({r, c, v}); }
    CsrMatrix build() const;
    int rows() const { return rows_; }
    int cols() const { return cols_; }

  private:
    struct Entry {
        int r, c;
        double v;
    };
    int rows_, cols_;
    std::vector<Entry> entries_;
};

/// a + b on a merged pattern (dimensions must match).
CsrMatrix add_matrices(const CsrMatrix& a, const CsrMatrix& b, double sa = 1.0, double sb = 1.0);

/// Copy values of `src` into `dst` (whose pattern must contain src's), scaled by s.
/// Entries of dst not present in src are left untouched.
void scatter_into(const CsrMatrix& src, CsrMatrix& dst, double s = 1.0);

} // namespace fsim
