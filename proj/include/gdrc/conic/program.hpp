#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gdrc/matrix.hpp"
#include "gdrc/norms.hpp"

namespace gdrc::conic {

// Affine scalar expression: sum of coef * x[var] plus a constant. Variable
// indices refer to the flat scalar layout of a Program.
struct LinExpr {
    std::vector<std::pair<std::uint32_t, double>> terms;
    double constant = 0.0;

    LinExpr() = default;
    /*implicit*/ LinExpr(double c) : constant(c) {}

    static LinExpr variable(std::uint32_t idx, double coef = 1.0) {
        LinExpr e;
        e.terms.emplace_back(idx, coef);
        return e;
    }

    LinExpr& add(std::uint32_t idx, double coef) {
        if (coef != 0.0) terms.emplace_back(idx, coef);
        return *this;
    }

    LinExpr& operator+=(const LinExpr& o) {
        terms.insert(terms.end(), o.terms.begin(), o.terms.end());
        constant += o.constant;
        return *this;
    }
    LinExpr& operator-=(const LinExpr& o) {
        for (const auto& [v, c] : o.terms) terms.emplace_back(v, -c);
        constant -= o.constant;
        return *this;
    }
    LinExpr& operator*=(double s) {
        for (auto& [v, c] : terms) c *= s;
        constant *= s;
        return *this;
    }

    friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
    friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
    friend LinExpr operator*(LinExpr a, double s) { return a *= s; }
    friend LinExpr operator*(double s, LinExpr a) { return a *= s; }
    friend LinExpr operator-(LinExpr a) { return a *= -1.0; }

    // Merge duplicate variables; drop zero coefficients.
    void compress();

    double evaluate(const Vector& x) const {
        double v = constant;
        for (const auto& [idx, c] : terms) v += c * x[idx];
        return v;
    }

    bool is_constant() const { return terms.empty(); }
};

enum class BlockKind { Scalar, Vec, SymMatrix };

struct VarBlock {
    std::string name;
    BlockKind kind;
    std::size_t dim;           // length for Vec, side for SymMatrix, 1 for Scalar
    std::size_t offset;        // first flat scalar index
    std::size_t scalar_count;  // dim, or dim*(dim+1)/2 for SymMatrix
};

enum class ConstraintKind { LinEq, LinIneq, Soc, NormCap, Psd };

struct Constraint {
    ConstraintKind kind;
    std::string label;

    LinExpr scalar;             // LinEq: == 0, LinIneq: >= 0
    std::vector<LinExpr> arg;   // Soc / NormCap argument vector
    LinExpr bound;              // Soc / NormCap right-hand side
    NormOrder order = NormOrder::Two;  // NormCap only
    std::vector<LinExpr> mat;   // Psd: row-major dense d x d, symmetrized
    std::size_t psd_dim = 0;
};

using BlockId = std::size_t;
using ConstraintId = std::size_t;

// Solver-agnostic conic program: named variable blocks, a linear objective
// (minimized), and constraints over linear, second-order and PSD cones plus
// dual-norm caps. Symmetric matrix blocks are stored as svec: upper triangle
// in column-major order (0,0), (0,1), (1,1), (0,2), ... with off-diagonal
// entries scaled by sqrt(2), so that the Euclidean inner product of two svec
// vectors equals the Frobenius inner product of the matrices.
class Program {
public:
    BlockId add_scalar(const std::string& name);
    BlockId add_vector(const std::string& name, std::size_t dim);
    BlockId add_sym_matrix(const std::string& name, std::size_t dim);

    const std::vector<VarBlock>& blocks() const { return blocks_; }
    const VarBlock& block(BlockId b) const { return blocks_[b]; }
    std::size_t num_scalars() const { return num_scalars_; }

    // Flat index of a vector entry / scalar.
    std::uint32_t index(BlockId b, std::size_t i = 0) const;
    // Flat index of svec entry (i, j), i <= j, of a SymMatrix block.
    std::uint32_t svec_index(BlockId b, std::size_t i, std::size_t j) const;

    // Single-variable expression x[b][i].
    LinExpr v(BlockId b, std::size_t i = 0) const { return LinExpr::variable(index(b, i)); }

    // Matrix entry (i, j) of a SymMatrix block as an expression (undoes the
    // sqrt(2) storage scaling for off-diagonal entries).
    LinExpr mat_entry(BlockId b, std::size_t i, std::size_t j) const;

    // Frobenius inner product <X, C> of a SymMatrix block with a constant
    // symmetric matrix.
    LinExpr frob_inner(BlockId b, const Matrix& c) const;

    // i-th component of X * y for a SymMatrix block and constant vector y.
    LinExpr mat_vec_entry(BlockId b, const Vector& y, std::size_t i) const;

    LinExpr trace(BlockId b) const;

    void set_objective(LinExpr e) { objective_ = std::move(e); objective_.compress(); }
    const LinExpr& objective() const { return objective_; }

    ConstraintId add_eq(LinExpr e, std::string label);
    ConstraintId add_ineq(LinExpr e, std::string label);  // e >= 0
    // ||arg||_2 <= bound
    ConstraintId add_soc(std::vector<LinExpr> arg, LinExpr bound, std::string label);
    // ||arg||_q <= bound for q in {1, 2, inf}
    ConstraintId add_norm_cap(NormOrder q, std::vector<LinExpr> arg, LinExpr bound,
                              std::string label);
    // mat must be square; it is symmetrized from its upper triangle.
    ConstraintId add_psd_block(std::vector<std::vector<LinExpr>> mat, std::string label);

    const std::vector<Constraint>& constraints() const { return constraints_; }

    // JSON document of blocks, cones and sparse triplets, for golden-file
    // tests and debugging.
    std::string dump_json() const;

private:
    std::vector<VarBlock> blocks_;
    std::vector<Constraint> constraints_;
    LinExpr objective_;
    std::size_t num_scalars_ = 0;
};

}  // namespace gdrc::conic
