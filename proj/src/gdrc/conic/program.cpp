#include "gdrc/conic/program.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace gdrc::conic {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488016887242097;
}

void LinExpr::compress() {
    if (terms.empty()) return;
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < terms.size();) {
        std::uint32_t v = terms[i].first;
        double c = 0.0;
        while (i < terms.size() && terms[i].first == v) c += terms[i++].second;
        if (c != 0.0) terms[out++] = {v, c};
    }
    terms.resize(out);
}

BlockId Program::add_scalar(const std::string& name) {
    blocks_.push_back({name, BlockKind::Scalar, 1, num_scalars_, 1});
    num_scalars_ += 1;
    return blocks_.size() - 1;
}

BlockId Program::add_vector(const std::string& name, std::size_t dim) {
    if (dim == 0) throw ShapeError("vector block must have positive dimension");
    blocks_.push_back({name, BlockKind::Vec, dim, num_scalars_, dim});
    num_scalars_ += dim;
    return blocks_.size() - 1;
}

BlockId Program::add_sym_matrix(const std::string& name, std::size_t dim) {
    if (dim == 0) throw ShapeError("matrix block must have positive dimension");
    const std::size_t count = dim * (dim + 1) / 2;
    blocks_.push_back({name, BlockKind::SymMatrix, dim, num_scalars_, count});
    num_scalars_ += count;
    return blocks_.size() - 1;
}

std::uint32_t Program::index(BlockId b, std::size_t i) const {
    const VarBlock& blk = blocks_[b];
    if (i >= blk.scalar_count) throw RangeError("block index out of range");
    return static_cast<std::uint32_t>(blk.offset + i);
}

std::uint32_t Program::svec_index(BlockId b, std::size_t i, std::size_t j) const {
    const VarBlock& blk = blocks_[b];
    if (blk.kind != BlockKind::SymMatrix) throw ShapeError("svec_index on non-matrix block");
    if (i > j) std::swap(i, j);
    if (j >= blk.dim) throw RangeError("svec index out of range");
    return static_cast<std::uint32_t>(blk.offset + j * (j + 1) / 2 + i);
}

LinExpr Program::mat_entry(BlockId b, std::size_t i, std::size_t j) const {
    const double coef = (i == j) ? 1.0 : 1.0 / kSqrt2;
    return LinExpr::variable(svec_index(b, i, j), coef);
}

LinExpr Program::frob_inner(BlockId b, const Matrix& c) const {
    const VarBlock& blk = blocks_[b];
    if (c.rows() != blk.dim || c.cols() != blk.dim)
        throw ShapeError("frob_inner dimension mismatch");
    LinExpr e;
    for (std::size_t j = 0; j < blk.dim; ++j) {
        e.add(svec_index(b, j, j), c(j, j));
        for (std::size_t i = 0; i < j; ++i) {
            // <X, C> picks up C_ij + C_ji on the off-diagonal pair; the svec
            // variable already carries the sqrt(2) scale.
            e.add(svec_index(b, i, j), (c(i, j) + c(j, i)) * 0.5 * kSqrt2);
        }
    }
    return e;
}

LinExpr Program::mat_vec_entry(BlockId b, const Vector& y, std::size_t i) const {
    const VarBlock& blk = blocks_[b];
    if (y.size() != blk.dim) throw ShapeError("mat_vec_entry dimension mismatch");
    LinExpr e;
    for (std::size_t j = 0; j < blk.dim; ++j) {
        const double coef = (i == j) ? 1.0 : 1.0 / kSqrt2;
        e.add(svec_index(b, std::min(i, j), std::max(i, j)), coef * y[j]);
    }
    e.compress();
    return e;
}

LinExpr Program::trace(BlockId b) const {
    const VarBlock& blk = blocks_[b];
    LinExpr e;
    for (std::size_t j = 0; j < blk.dim; ++j) e.add(svec_index(b, j, j), 1.0);
    return e;
}

ConstraintId Program::add_eq(LinExpr e, std::string label) {
    e.compress();
    constraints_.push_back({ConstraintKind::LinEq, std::move(label), std::move(e), {}, {}, NormOrder::Two, {}, 0});
    return constraints_.size() - 1;
}

ConstraintId Program::add_ineq(LinExpr e, std::string label) {
    e.compress();
    constraints_.push_back({ConstraintKind::LinIneq, std::move(label), std::move(e), {}, {}, NormOrder::Two, {}, 0});
    return constraints_.size() - 1;
}

ConstraintId Program::add_soc(std::vector<LinExpr> arg, LinExpr bound, std::string label) {
    for (auto& a : arg) a.compress();
    bound.compress();
    Constraint c{ConstraintKind::Soc, std::move(label), {}, std::move(arg), std::move(bound), NormOrder::Two, {}, 0};
    constraints_.push_back(std::move(c));
    return constraints_.size() - 1;
}

ConstraintId Program::add_norm_cap(NormOrder q, std::vector<LinExpr> arg, LinExpr bound,
                                   std::string label) {
    for (auto& a : arg) a.compress();
    bound.compress();
    Constraint c{ConstraintKind::NormCap, std::move(label), {}, std::move(arg), std::move(bound), q, {}, 0};
    constraints_.push_back(std::move(c));
    return constraints_.size() - 1;
}

ConstraintId Program::add_psd_block(std::vector<std::vector<LinExpr>> mat, std::string label) {
    const std::size_t d = mat.size();
    for (const auto& row : mat)
        if (row.size() != d) throw ShapeError("psd block must be square");

    Constraint c;
    c.kind = ConstraintKind::Psd;
    c.label = std::move(label);
    c.psd_dim = d;
    c.mat.resize(d * d);
    // Symmetrize from the upper triangle.
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            LinExpr e = mat[i][j];
            e.compress();
            c.mat[i * d + j] = e;
            c.mat[j * d + i] = std::move(e);
        }
    }
    constraints_.push_back(std::move(c));
    return constraints_.size() - 1;
}

namespace {

nlohmann::json expr_json(const LinExpr& e) {
    nlohmann::json t = nlohmann::json::array();
    for (const auto& [v, c] : e.terms) t.push_back({v, c});
    nlohmann::json j;
    j["terms"] = std::move(t);
    j["const"] = e.constant;
    return j;
}

}  // namespace

std::string Program::dump_json() const {
    nlohmann::json j;
    j["num_scalars"] = num_scalars_;
    nlohmann::json jb = nlohmann::json::array();
    for (const auto& b : blocks_) {
        jb.push_back({{"name", b.name},
                      {"kind", b.kind == BlockKind::Scalar  ? "scalar"
                               : b.kind == BlockKind::Vec ? "vector"
                                                            : "sym_matrix"},
                      {"dim", b.dim},
                      {"offset", b.offset},
                      {"scalars", b.scalar_count}});
    }
    j["blocks"] = std::move(jb);
    j["objective"] = expr_json(objective_);

    nlohmann::json jc = nlohmann::json::array();
    for (const auto& c : constraints_) {
        nlohmann::json e;
        e["label"] = c.label;
        switch (c.kind) {
            case ConstraintKind::LinEq:
                e["kind"] = "eq";
                e["expr"] = expr_json(c.scalar);
                break;
            case ConstraintKind::LinIneq:
                e["kind"] = "ineq";
                e["expr"] = expr_json(c.scalar);
                break;
            case ConstraintKind::Soc:
            case ConstraintKind::NormCap: {
                e["kind"] = c.kind == ConstraintKind::Soc ? "soc" : "norm_cap";
                e["q"] = norm_name(c.order);
                nlohmann::json args = nlohmann::json::array();
                for (const auto& a : c.arg) args.push_back(expr_json(a));
                e["arg"] = std::move(args);
                e["bound"] = expr_json(c.bound);
                break;
            }
            case ConstraintKind::Psd: {
                e["kind"] = "psd";
                e["dim"] = c.psd_dim;
                nlohmann::json entries = nlohmann::json::array();
                for (std::size_t i = 0; i < c.psd_dim; ++i)
                    for (std::size_t jj = i; jj < c.psd_dim; ++jj) {
                        const LinExpr& ex = c.mat[i * c.psd_dim + jj];
                        if (ex.terms.empty() && ex.constant == 0.0) continue;
                        entries.push_back({{"row", i}, {"col", jj}, {"expr", expr_json(ex)}});
                    }
                e["entries"] = std::move(entries);
                break;
            }
        }
        jc.push_back(std::move(e));
    }
    j["constraints"] = std::move(jc);
    return j.dump(2);
}

}  // namespace gdrc::conic
