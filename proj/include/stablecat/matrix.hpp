#pragma once

#include "stablecat/field.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stablecat {

/// Dense row-major matrix over F_p.  0 x n and n x 0 shapes are legal and stand for maps to/from the zero space.
class Matrix
{
    Field field_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<elem_t> data_;

    public:
    Matrix(Field f, std::size_t rows, std::size_t cols);
    /// Entries are reduced mod p.
    static Matrix from_rows(Field f, const std::vector<std::vector<std::int64_t>> &rows);
    static Matrix identity(Field f, std::size_t n);
    /// One column per vector.
    static Matrix from_columns(Field f, std::size_t rows, const std::vector<std::vector<elem_t>> &cols);

    const Field &field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    elem_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    elem_t &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    std::span<const elem_t> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    const std::vector<elem_t> &entries() const { return data_; }
    std::vector<elem_t> column(std::size_t j) const;

    bool is_zero() const;
    bool is_identity() const;
    bool operator==(const Matrix &o) const
    {
        return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    Matrix operator+(const Matrix &o) const;
    Matrix operator-(const Matrix &o) const;
    Matrix operator-() const;
    Matrix operator*(const Matrix &o) const;
    Matrix scaled(elem_t c) const;
    Matrix &operator+=(const Matrix &o);

    Matrix transpose() const;
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const Matrix &b);
    Matrix hstack(const Matrix &right) const;
    Matrix vstack(const Matrix &below) const;
    /// Selected columns, in order.
    Matrix select_columns(std::span<const std::size_t> idx) const;

    /// Entries flattened row-major (used to treat matrices as vectors in hom-spaces).
    std::vector<elem_t> flatten() const { return data_; }
    static Matrix unflatten(Field f, std::size_t rows, std::size_t cols, std::span<const elem_t> v);

    std::string to_string() const;
    std::vector<std::vector<std::int64_t>> to_nested() const;
};

Matrix block_diagonal(Field f, std::span<const Matrix> blocks);

struct RrefResult
{
    Matrix rref;
    std::size_t rank;
    std::vector<std::size_t> pivot_cols;
    /// cols x (cols - rank); columns form a basis of the null space.
    Matrix kernel_basis;
};

RrefResult rref_full(const Matrix &m);
std::size_t rank(const Matrix &m);

struct AffineSolution
{
    /// a.cols x b.cols
    Matrix particular;
    /// a.cols x k; columns span the solutions of a x = 0.
    Matrix homogeneous_basis;
};

/// Solution set of a x = b (columnwise), or nullopt when inconsistent.  Throws contract_error if a.rows != b.rows.
std::optional<AffineSolution> solve_affine(const Matrix &a, const Matrix &b);

std::optional<Matrix> inverse(const Matrix &m);

/// Columns of a basis for the column space of m (a subset of m's columns).
Matrix column_space(const Matrix &m);

/// Deterministic in (rows, cols, seed, p).
Matrix seeded_random_matrix(Field f, std::size_t rows, std::size_t cols, std::uint64_t seed);

/// Independent subset of the given same-shape matrices, viewed as vectors; order preserving.
std::vector<Matrix> linear_basis(const std::vector<Matrix> &ms);

}
