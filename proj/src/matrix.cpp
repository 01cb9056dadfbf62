#include "stablecat/matrix.hpp"

#include "stablecat/error.hpp"

#include <random>
#include <sstream>

namespace stablecat {

namespace {

void require_same_shape(const Matrix &a, const Matrix &b, const char *op)
{
    if (!(a.field() == b.field()) || a.rows() != b.rows() || a.cols() != b.cols())
        throw contract_error(std::string("shape mismatch in ") + op);
}

}

Matrix::Matrix(Field f, std::size_t rows, std::size_t cols) : field_(f), rows_(rows), cols_(cols), data_(rows * cols, 0) { }

Matrix Matrix::from_rows(Field f, const std::vector<std::vector<std::int64_t>> &rows)
{
    std::size_t nc = rows.empty() ? 0 : rows.front().size();
    Matrix m(f, rows.size(), nc);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != nc) throw contract_error("ragged matrix rows");
        for (std::size_t j = 0; j < nc; ++j) m(i, j) = f.reduce(rows[i][j]);
    }
    return m;
}

Matrix Matrix::identity(Field f, std::size_t n)
{
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Matrix Matrix::from_columns(Field f, std::size_t rows, const std::vector<std::vector<elem_t>> &cols)
{
    Matrix m(f, rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows) throw contract_error("column length mismatch");
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
}

std::vector<elem_t> Matrix::column(std::size_t j) const
{
    std::vector<elem_t> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

bool Matrix::is_zero() const
{
    for (auto v : data_)
        if (v) return false;
    return true;
}

bool Matrix::is_identity() const
{
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if ((*this)(i, j) != (i == j ? 1u : 0u)) return false;
    return true;
}

Matrix Matrix::operator+(const Matrix &o) const
{
    Matrix r = *this;
    r += o;
    return r;
}

Matrix &Matrix::operator+=(const Matrix &o)
{
    require_same_shape(*this, o, "+");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] = field_.add(data_[k], o.data_[k]);
    return *this;
}

Matrix Matrix::operator-(const Matrix &o) const
{
    require_same_shape(*this, o, "-");
    Matrix r = *this;
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = field_.sub(data_[k], o.data_[k]);
    return r;
}

Matrix Matrix::operator-() const
{
    Matrix r = *this;
    for (auto &v : r.data_) v = field_.neg(v);
    return r;
}

Matrix Matrix::operator*(const Matrix &o) const
{
    if (!(field_ == o.field_) || cols_ != o.rows_)
        throw contract_error("shape mismatch in *: " + std::to_string(rows_) + "x" + std::to_string(cols_) + " * " +
                             std::to_string(o.rows_) + "x" + std::to_string(o.cols_));
    Matrix r(field_, rows_, o.cols_);
    const std::uint64_t p = field_.characteristic();
    constexpr std::uint64_t limit = std::uint64_t(1) << 62;
    std::vector<std::uint64_t> acc(o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        std::fill(acc.begin(), acc.end(), 0);
        for (std::size_t k = 0; k < cols_; ++k) {
            std::uint64_t a = data_[i * cols_ + k];
            if (!a) continue;
            const elem_t *orow = o.data_.data() + k * o.cols_;
            for (std::size_t j = 0; j < o.cols_; ++j) {
                acc[j] += a * orow[j];
                if (acc[j] >= limit) acc[j] %= p;
            }
        }
        for (std::size_t j = 0; j < o.cols_; ++j) r.data_[i * o.cols_ + j] = static_cast<elem_t>(acc[j] % p);
    }
    return r;
}

Matrix Matrix::scaled(elem_t c) const
{
    Matrix r = *this;
    for (auto &v : r.data_) v = field_.mul(v, c);
    return r;
}

Matrix Matrix::transpose() const
{
    Matrix r(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const
{
    if (r0 + nr > rows_ || c0 + nc > cols_) throw contract_error("block out of range");
    Matrix r(field_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
    return r;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix &b)
{
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw contract_error("set_block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
        for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

Matrix Matrix::hstack(const Matrix &right) const
{
    if (rows_ != right.rows_) throw contract_error("hstack row mismatch");
    Matrix r(field_, rows_, cols_ + right.cols_);
    r.set_block(0, 0, *this);
    r.set_block(0, cols_, right);
    return r;
}

Matrix Matrix::vstack(const Matrix &below) const
{
    if (cols_ != below.cols_) throw contract_error("vstack column mismatch");
    Matrix r(field_, rows_ + below.rows_, cols_);
    r.set_block(0, 0, *this);
    r.set_block(rows_, 0, below);
    return r;
}

Matrix Matrix::select_columns(std::span<const std::size_t> idx) const
{
    Matrix r(field_, rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) r(i, j) = (*this)(i, idx[j]);
    return r;
}

Matrix Matrix::unflatten(Field f, std::size_t rows, std::size_t cols, std::span<const elem_t> v)
{
    if (v.size() != rows * cols) throw contract_error("unflatten size mismatch");
    Matrix m(f, rows, cols);
    std::copy(v.begin(), v.end(), m.data_.begin());
    return m;
}

std::string Matrix::to_string() const
{
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
        os << "]";
    }
    os << "]";
    return os.str();
}

std::vector<std::vector<std::int64_t>> Matrix::to_nested() const
{
    std::vector<std::vector<std::int64_t>> out(rows_, std::vector<std::int64_t>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
    return out;
}

Matrix block_diagonal(Field f, std::span<const Matrix> blocks)
{
    std::size_t nr = 0, nc = 0;
    for (const auto &b : blocks) {
        nr += b.rows();
        nc += b.cols();
    }
    Matrix r(f, nr, nc);
    std::size_t ro = 0, co = 0;
    for (const auto &b : blocks) {
        r.set_block(ro, co, b);
        ro += b.rows();
        co += b.cols();
    }
    return r;
}

RrefResult rref_full(const Matrix &m)
{
    const Field &f = m.field();
    Matrix r = m;
    const std::size_t nr = m.rows(), nc = m.cols();
    std::vector<std::size_t> pivots;
    std::size_t prow = 0;
    for (std::size_t c = 0; c < nc && prow < nr; ++c) {
        std::size_t sel = nr;
        for (std::size_t i = prow; i < nr; ++i)
            if (r(i, c)) {
                sel = i;
                break;
            }
        if (sel == nr) continue;
        if (sel != prow)
            for (std::size_t j = c; j < nc; ++j) std::swap(r(sel, j), r(prow, j));
        elem_t iv = f.inv(r(prow, c));
        for (std::size_t j = c; j < nc; ++j) r(prow, j) = f.mul(r(prow, j), iv);
        for (std::size_t i = 0; i < nr; ++i) {
            if (i == prow) continue;
            elem_t factor = r(i, c);
            if (!factor) continue;
            for (std::size_t j = c; j < nc; ++j)
                if (r(prow, j)) r(i, j) = f.sub(r(i, j), f.mul(factor, r(prow, j)));
        }
        pivots.push_back(c);
        ++prow;
    }
    const std::size_t rk = pivots.size();
    std::vector<bool> is_pivot(nc, false);
    for (auto c : pivots) is_pivot[c] = true;
    Matrix kernel(f, nc, nc - rk);
    std::size_t k = 0;
    for (std::size_t free = 0; free < nc; ++free) {
        if (is_pivot[free]) continue;
        kernel(free, k) = 1;
        for (std::size_t i = 0; i < rk; ++i) kernel(pivots[i], k) = f.neg(r(i, free));
        ++k;
    }
    return {std::move(r), rk, std::move(pivots), std::move(kernel)};
}

std::size_t rank(const Matrix &m) { return rref_full(m).rank; }

std::optional<AffineSolution> solve_affine(const Matrix &a, const Matrix &b)
{
    if (a.rows() != b.rows())
        throw contract_error("solve_affine: a has " + std::to_string(a.rows()) + " rows but b has " +
                             std::to_string(b.rows()));
    const Field &f = a.field();
    auto aug = rref_full(a.hstack(b));
    auto base = rref_full(a);
    // Inconsistent iff a pivot lands in the b block.
    for (auto c : aug.pivot_cols)
        if (c >= a.cols()) return std::nullopt;
    Matrix particular(f, a.cols(), b.cols());
    for (std::size_t i = 0; i < aug.rank; ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) particular(aug.pivot_cols[i], j) = aug.rref(i, a.cols() + j);
    return AffineSolution{std::move(particular), std::move(base.kernel_basis)};
}

std::optional<Matrix> inverse(const Matrix &m)
{
    if (m.rows() != m.cols()) return std::nullopt;
    auto sol = solve_affine(m, Matrix::identity(m.field(), m.rows()));
    if (!sol || sol->homogeneous_basis.cols() != 0) return std::nullopt;
    return sol->particular;
}

Matrix column_space(const Matrix &m)
{
    auto r = rref_full(m);
    return m.select_columns(r.pivot_cols);
}

Matrix seeded_random_matrix(Field f, std::size_t rows, std::size_t cols, std::uint64_t seed)
{
    std::mt19937_64 gen(seed ^ (std::uint64_t(f.characteristic()) << 32) ^ (rows * 0x9E3779B97F4A7C15ull) ^ cols);
    Matrix m(f, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = static_cast<elem_t>(gen() % f.characteristic());
    return m;
}

std::vector<Matrix> linear_basis(const std::vector<Matrix> &ms)
{
    if (ms.empty()) return {};
    const Field f = ms.front().field();
    const std::size_t len = ms.front().rows() * ms.front().cols();
    std::vector<std::vector<elem_t>> cols;
    cols.reserve(ms.size());
    for (const auto &m : ms) cols.push_back(m.flatten());
    auto r = rref_full(Matrix::from_columns(f, len, cols));
    std::vector<Matrix> out;
    for (auto c : r.pivot_cols) out.push_back(ms[c]);
    return out;
}

}
