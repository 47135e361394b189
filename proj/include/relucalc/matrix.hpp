#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "relucalc/errors.hpp"

namespace relucalc {

// Row-sparse real matrix. Zero entries are never stored, so the stored entry
// count is exactly the nonzero count that the size metric reports. Network
// constructions (block-diagonal stacking, identity padding) produce weight
// matrices whose density drops quickly with scale; documents still encode
// them densely.
class Matrix {
  public:
    struct Entry {
        std::size_t col;
        double val;
    };

    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), row_(rows) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.row_[i].push_back({i, 1.0});
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<double>>& dense) {
        const std::size_t r = dense.size();
        const std::size_t c = r == 0 ? 0 : dense.front().size();
        Matrix m(r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (dense[i].size() != c) throw InputError("matrix rows have unequal lengths");
            for (std::size_t j = 0; j < c; ++j)
                if (dense[i][j] != 0.0) m.row_[i].push_back({j, dense[i][j]});
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double at(std::size_t i, std::size_t j) const {
        for (const Entry& e : row_[i])
            if (e.col == j) return e.val;
        return 0.0;
    }

    // Inserts, replaces, or (for v == 0) removes an entry.
    void set(std::size_t i, std::size_t j, double v) {
        auto& r = row_[i];
        auto it = r.begin();
        while (it != r.end() && it->col < j) ++it;
        if (it != r.end() && it->col == j) {
            if (v == 0.0)
                r.erase(it);
            else
                it->val = v;
        } else if (v != 0.0) {
            r.insert(it, {j, v});
        }
    }

    const std::vector<Entry>& row_entries(std::size_t i) const { return row_[i]; }

    std::vector<double> row_dense(std::size_t i) const {
        std::vector<double> out(cols_, 0.0);
        for (const Entry& e : row_[i]) out[e.col] = e.val;
        return out;
    }

    std::size_t nonzeros() const {
        std::size_t n = 0;
        for (const auto& r : row_) n += r.size();
        return n;
    }

    bool all_finite() const {
        for (const auto& r : row_)
            for (const Entry& e : r)
                if (!std::isfinite(e.val)) return false;
        return true;
    }

    // y = A x, accumulated in column order within each row.
    std::vector<double> apply(std::span<const double> x) const {
        if (x.size() != cols_) throw InputError("matrix-vector dimension mismatch");
        std::vector<double> y(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            double acc = 0.0;
            for (const Entry& e : row_[i]) acc += e.val * x[e.col];
            y[i] = acc;
        }
        return y;
    }

    // C = (*this) * rhs. Entries that cancel to exact zero are dropped.
    Matrix multiply(const Matrix& rhs) const {
        if (cols_ != rhs.rows_) throw InputError("matrix-matrix dimension mismatch");
        Matrix out(rows_, rhs.cols_);
        std::vector<double> acc(rhs.cols_, 0.0);
        std::vector<std::size_t> touched;
        for (std::size_t i = 0; i < rows_; ++i) {
            touched.clear();
            for (const Entry& a : row_[i]) {
                for (const Entry& b : rhs.row_[a.col]) {
                    if (acc[b.col] == 0.0) touched.push_back(b.col);
                    acc[b.col] += a.val * b.val;
                }
            }
            std::sort(touched.begin(), touched.end());
            for (std::size_t j : touched) {
                if (acc[j] != 0.0) out.row_[i].push_back({j, acc[j]});
                acc[j] = 0.0;
            }
        }
        return out;
    }

    Matrix scaled(double a) const {
        Matrix out(rows_, cols_);
        if (a == 0.0) return out;
        out.row_ = row_;
        for (auto& r : out.row_)
            for (Entry& e : r) e.val *= a;
        return out;
    }

    static Matrix vstack(const Matrix& top, const Matrix& bottom) {
        if (top.cols_ != bottom.cols_) throw InputError("vstack column mismatch");
        Matrix out(top.rows_ + bottom.rows_, top.cols_);
        for (std::size_t i = 0; i < top.rows_; ++i) out.row_[i] = top.row_[i];
        for (std::size_t i = 0; i < bottom.rows_; ++i) out.row_[top.rows_ + i] = bottom.row_[i];
        return out;
    }

    static Matrix hstack(const Matrix& left, const Matrix& right) {
        if (left.rows_ != right.rows_) throw InputError("hstack row mismatch");
        Matrix out(left.rows_, left.cols_ + right.cols_);
        for (std::size_t i = 0; i < left.rows_; ++i) {
            out.row_[i] = left.row_[i];
            for (const Entry& e : right.row_[i]) out.row_[i].push_back({left.cols_ + e.col, e.val});
        }
        return out;
    }

    static Matrix block_diag(std::span<const Matrix> blocks) {
        std::size_t r = 0, c = 0;
        for (const Matrix& b : blocks) {
            r += b.rows_;
            c += b.cols_;
        }
        Matrix out(r, c);
        std::size_t ro = 0, co = 0;
        for (const Matrix& b : blocks) {
            for (std::size_t i = 0; i < b.rows_; ++i)
                for (const Entry& e : b.row_[i]) out.row_[ro + i].push_back({co + e.col, e.val});
            ro += b.rows_;
            co += b.cols_;
        }
        return out;
    }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<std::vector<Entry>> row_;
};

} // namespace relucalc
