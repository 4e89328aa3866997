#include "fsim/sparse.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace fsim {

int CsrPattern::find(int r, int c) const {
    const int lo = row_ptr[r], hi = row_ptr[r + 1];
    auto it = std::lower_bound(col_idx.begin() + lo, col_idx.begin() + hi, c);
    if (it == col_idx.begin() + hi || *it != c) return -1;
    return static_cast<int>(it - col_idx.begin());
}

double CsrMatrix::at(int r, int c) const {
    const int k = pattern->find(r, c);
    return k < 0 ? 0.0 : values[k];
}

void CsrMatrix::add(int r, int c, double v) {
    const int k = pattern->find(r, c);
    if (k < 0) throw std::logic_error("CsrMatrix::add: entry outside pattern");
    values[k] += v;
}

void matvec(const CsrMatrix& A, std::span<const double> x, std::span<double> y) {
    const auto& p = *A.pattern;
    assert(static_cast<int>(x.size()) == p.cols && static_cast<int>(y.size()) == p.rows);
    const int* rp = p.row_ptr.data();
    const int* ci = p.col_idx.data();
    const double* v = A.values.data();
#pragma omp parallel for schedule(static)
    for (int r = 0; r < p.rows; ++r) {
        double s = 0.0;
        for (int k = rp[r]; k < rp[r + 1]; ++k) s += v[k] * x[ci[k]];
        y[r] = s;
    }
}

void matvec_add(const CsrMatrix& A, std::span<const double> x, std::span<double> y, double s) {
    const auto& p = *A.pattern;
    assert(static_cast<int>(x.size()) == p.cols && static_cast<int>(y.size()) == p.rows);
    const int* rp = p.row_ptr.data();
    const int* ci = p.col_idx.data();
    const double* v = A.values.data();
#pragma omp parallel for schedule(static)
    for (int r = 0; r < p.rows; ++r) {
        double acc = 0.0;
        for (int k = rp[r]; k < rp[r + 1]; ++k) acc += v[k] * x[ci[k]];
        y[r] += s * acc;
    }
}

double symmetry_defect(const CsrMatrix& A) {
    const auto& p = *A.pattern;
    double defect = 0.0;
    for (int r = 0; r < p.rows; ++r) {
        for (int k = p.row_ptr[r]; k < p.row_ptr[r + 1]; ++k) {
            const int c = p.col_idx[k];
            if (c < r) continue; // each unordered pair once
            const int kt = p.find(c, r);
            const double vt = kt < 0 ? 0.0 : A.values[kt];
            defect = std::max(defect, std::abs(A.values[k] - vt));
        }
    }
    return defect;
}

CsrMatrix CsrBuilder::build() const {
    auto pat = std::make_shared<CsrPattern>();
    pat->rows = rows_;
    pat->cols = cols_;
    std::vector<Entry> sorted = entries_;
    std::sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) {
        return a.r != b.r ? a.r < b.r : a.c < b.c;
    });
    pat->row_ptr.assign(rows_ + 1, 0);
    std::vector<double> vals;
    vals.reserve(sorted.size());
    pat->col_idx.reserve(sorted.size());
    std::size_t i = 0;
    for (int r = 0; r < rows_; ++r) {
        while (i < sorted.size() && sorted[i].r == r) {
            const int c = sorted[i].c;
            double v = 0.0;
            while (i < sorted.size() && sorted[i].r == r && sorted[i].c == c) v += sorted[i++].v;
            pat->col_idx.push_back(c);
            vals.push_back(v);
        }
        pat->row_ptr[r + 1] = static_cast<int>(pat->col_idx.size());
    }
    CsrMatrix m;
    m.pattern = std::move(pat);
    m.values = std::move(vals);
    return m;
}

CsrMatrix add_matrices(const CsrMatrix& a, const CsrMatrix& b, double sa, double sb) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("add_matrices: dimension mismatch");
    CsrBuilder builder(a.rows(), a.cols());
    const auto& pa = *a.pattern;
    for (int r = 0; r < pa.rows; ++r)
        for (int k = pa.row_ptr[r]; k < pa.row_ptr[r + 1]; ++k)
            builder.add(r, pa.col_idx[k], sa * a.values[k]);
    const auto& pb = *b.pattern;
    for (int r = 0; r < pb.rows; ++r)
        for (int k = pb.row_ptr[r]; k < pb.row_ptr[r + 1]; ++k)
            builder.add(r, pb.col_idx[k], sb * b.values[k]);
    return builder.build();
}

void scatter_into(const CsrMatrix& src, CsrMatrix& dst, double s) {
    const auto& ps = *src.pattern;
    for (int r = 0; r < ps.rows; ++r) {
        for (int k = ps.row_ptr[r]; k < ps.row_ptr[r + 1]; ++k) {
            const int kd = dst.pattern->find(r, ps.col_idx[k]);
            if (kd < 0) throw std::logic_error("scatter_into: destination pattern too small");
            dst.values[kd] += s * src.values[k];
        }
    }
}

} // namespace fsim
