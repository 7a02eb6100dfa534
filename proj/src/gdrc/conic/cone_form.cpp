#include "cone_form.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>

#include "gdrc/linalg.hpp"

namespace gdrc::conic::detail {

namespace {

struct ExtExpr {
    std::vector<std::pair<std::uint32_t, double>> terms;
    double constant = 0.0;
};

ExtExpr from_lin(const LinExpr& e) {
    ExtExpr x;
    x.terms = e.terms;
    x.constant = e.constant;
    return x;
}

void compress(ExtExpr& e) {
    std::sort(e.terms.begin(), e.terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < e.terms.size();) {
        const std::uint32_t v = e.terms[i].first;
        double c = 0.0;
        while (i < e.terms.size() && e.terms[i].first == v) c += e.terms[i++].second;
        if (std::abs(c) > 0.0) e.terms[out++] = {v, c};
    }
    e.terms.resize(out);
}

std::string canonical_key(const std::vector<ExtExpr>& args) {
    std::string key;
    key.reserve(args.size() * 24);
    auto put = [&key](double d) {
        std::uint64_t bits;
        std::memcpy(&bits, &d, sizeof bits);
        key.append(reinterpret_cast<const char*>(&bits), sizeof bits);
    };
    for (const auto& a : args) {
        key += '|';
        for (const auto& [v, c] : a.terms) {
            key.append(reinterpret_cast<const char*>(&v), sizeof v);
            put(c);
        }
        key += ':';
        put(a.constant);
    }
    return key;
}

// Collector for the lowered constraint system over extended variables.
struct Builder {
    std::size_t ext_vars;
    std::vector<ExtExpr> diag_rows;
    struct PsdDraft {
        std::size_t dim;
        std::vector<ExtExpr> entries;  // row-major d*d
    };
    std::vector<PsdDraft> psd_drafts;
    std::vector<ExtExpr> equalities;

    // Second-order cones with identical argument vectors share one epigraph
    // variable: the arrow block is emitted once and each bound becomes a
    // linear row. Repeated per-sample robust margins collapse this way.
    struct PendingSoc {
        std::vector<ExtExpr> args;
        std::vector<ExtExpr> bounds;
        std::uint32_t epi = UINT32_MAX;
    };
    std::map<std::string, PendingSoc> socs;

    std::uint32_t new_aux() { return static_cast<std::uint32_t>(ext_vars++); }

    void add_row(ExtExpr e) {
        compress(e);
        diag_rows.push_back(std::move(e));
    }

    // ||args||_2 <= bound as an arrow PSD block [[bound, args^T], [args, bound*I]].
    void emit_arrow(const std::vector<ExtExpr>& args, const ExtExpr& bound) {
        PsdDraft d;
        d.dim = args.size() + 1;
        d.entries.assign(d.dim * d.dim, {});
        for (std::size_t i = 0; i < d.dim; ++i) d.entries[i * d.dim + i] = bound;
        for (std::size_t i = 0; i < args.size(); ++i) {
            d.entries[0 * d.dim + (i + 1)] = args[i];
            d.entries[(i + 1) * d.dim + 0] = args[i];
        }
        for (auto& e : d.entries) compress(e);
        psd_drafts.push_back(std::move(d));
    }

    void add_soc(const std::vector<ExtExpr>& args, const ExtExpr& bound) {
        PendingSoc& ps = socs[canonical_key(args)];
        if (ps.args.empty()) ps.args = args;
        ps.bounds.push_back(bound);
    }

    void flush_socs() {
        for (auto& [key, ps] : socs) {
            if (ps.bounds.size() == 1) {
                emit_arrow(ps.args, ps.bounds.front());
                continue;
            }
            ps.epi = new_aux();
            ExtExpr t;
            t.terms.emplace_back(ps.epi, 1.0);
            emit_arrow(ps.args, t);
            for (const auto& bound : ps.bounds) {
                ExtExpr row = bound;
                row.terms.emplace_back(ps.epi, -1.0);
                add_row(std::move(row));
            }
        }
        socs.clear();
    }

    void add_cap(NormOrder q, const std::vector<ExtExpr>& args, const ExtExpr& bound) {
        switch (q) {
            case NormOrder::Two:
                add_soc(args, bound);
                break;
            case NormOrder::Inf:
                for (const auto& a : args) {
                    ExtExpr lo = bound, hi = bound;
                    for (const auto& [v, c] : a.terms) {
                        lo.terms.emplace_back(v, -c);
                        hi.terms.emplace_back(v, c);
                    }
                    lo.constant -= a.constant;
                    hi.constant += a.constant;
                    add_row(std::move(lo));
                    add_row(std::move(hi));
                }
                break;
            case NormOrder::One: {
                ExtExpr total = bound;
                for (const auto& a : args) {
                    const std::uint32_t t = new_aux();
                    ExtExpr lo, hi;
                    lo.terms.emplace_back(t, 1.0);
                    hi.terms.emplace_back(t, 1.0);
                    for (const auto& [v, c] : a.terms) {
                        lo.terms.emplace_back(v, -c);
                        hi.terms.emplace_back(v, c);
                    }
                    lo.constant -= a.constant;
                    hi.constant += a.constant;
                    add_row(std::move(lo));
                    add_row(std::move(hi));
                    total.terms.emplace_back(t, -1.0);
                }
                add_row(std::move(total));
                break;
            }
        }
    }
};

}  // namespace

Vector ConeForm::expand(const Vector& x_compressed) const {
    Vector full(ext_vars, 0.0);
    for (std::size_t i = 0; i < kept.size(); ++i) full[kept[i]] = x_compressed[i];
    // recon expressions reference compressed indices
    for (const auto& r : recon) full[r.ext_index] = r.expr.eval(x_compressed);
    return full;
}

ConeForm lower(const Program& p) {
    Builder b;
    b.ext_vars = p.num_scalars();

    for (const auto& c : p.constraints()) {
        switch (c.kind) {
            case ConstraintKind::LinEq:
                b.equalities.push_back(from_lin(c.scalar));
                compress(b.equalities.back());
                break;
            case ConstraintKind::LinIneq:
                b.add_row(from_lin(c.scalar));
                break;
            case ConstraintKind::Soc:
            case ConstraintKind::NormCap: {
                std::vector<ExtExpr> args;
                args.reserve(c.arg.size());
                for (const auto& a : c.arg) args.push_back(from_lin(a));
                for (auto& a : args) compress(a);
                ExtExpr bound = from_lin(c.bound);
                compress(bound);
                b.add_cap(c.kind == ConstraintKind::Soc ? NormOrder::Two : c.order, args, bound);
                break;
            }
            case ConstraintKind::Psd: {
                Builder::PsdDraft d;
                d.dim = c.psd_dim;
                d.entries.reserve(c.mat.size());
                for (const auto& e : c.mat) {
                    d.entries.push_back(from_lin(e));
                    compress(d.entries.back());
                }
                b.psd_drafts.push_back(std::move(d));
                break;
            }
        }
    }

    b.flush_socs();

    ConeForm out;
    out.ext_vars = b.ext_vars;

    // --- Equality elimination by Gaussian substitution. Each equality picks
    // its largest-coefficient variable as pivot; the pivot is replaced by an
    // affine form over the remaining variables everywhere.
    std::map<std::uint32_t, ExtExpr> subst;  // pivot var -> replacement

    auto apply_subst = [&](ExtExpr& e) {
        bool touched = true;
        while (touched) {
            touched = false;
            ExtExpr next;
            next.constant = e.constant;
            for (const auto& [v, c] : e.terms) {
                const auto it = subst.find(v);
                if (it == subst.end()) {
                    next.terms.emplace_back(v, c);
                } else {
                    touched = true;
                    next.constant += c * it->second.constant;
                    for (const auto& [v2, c2] : it->second.terms)
                        next.terms.emplace_back(v2, c * c2);
                }
            }
            compress(next);
            e = std::move(next);
        }
    };

    for (ExtExpr eq : b.equalities) {
        apply_subst(eq);
        if (eq.terms.empty()) {
            if (std::abs(eq.constant) > 1e-9) {
                out.trivially_infeasible = true;
                out.infeasible_reason = "inconsistent equality constraints";
                return out;
            }
            continue;  // redundant
        }
        auto pivot = std::max_element(eq.terms.begin(), eq.terms.end(),
                                      [](const auto& x, const auto& y) {
                                          return std::abs(x.second) < std::abs(y.second);
                                      });
        const std::uint32_t pv = pivot->first;
        const double pc = pivot->second;
        ExtExpr repl;
        repl.constant = -eq.constant / pc;
        for (const auto& [v, c] : eq.terms)
            if (v != pv) repl.terms.emplace_back(v, -c / pc);
        subst[pv] = std::move(repl);
    }

    if (!subst.empty()) {
        // Flatten chains so each replacement references only free variables.
        for (auto& [v, e] : subst) apply_subst(e);
        for (auto& row : b.diag_rows) apply_subst(row);
        for (auto& d : b.psd_drafts)
            for (auto& e : d.entries) apply_subst(e);
    }

    // --- Compress the variable space.
    std::vector<std::uint32_t> remap(b.ext_vars, UINT32_MAX);
    for (std::uint32_t v = 0; v < b.ext_vars; ++v) {
        if (subst.count(v)) continue;
        remap[v] = static_cast<std::uint32_t>(out.kept.size());
        out.kept.push_back(v);
    }
    out.nvars = out.kept.size();

    auto to_row = [&](const ExtExpr& e) {
        SparseRow r;
        r.b0 = e.constant;
        r.a.reserve(e.terms.size());
        for (const auto& [v, c] : e.terms) r.a.emplace_back(remap[v], c);
        return r;
    };

    // Objective (substituted, compressed).
    ExtExpr obj = from_lin(p.objective());
    apply_subst(obj);
    out.cost.assign(out.nvars, 0.0);
    out.cost_offset = obj.constant;
    for (const auto& [v, c] : obj.terms) out.cost[remap[v]] += c;

    for (const auto& [v, e] : subst) out.recon.push_back({v, to_row(e)});

    for (auto& rowe : b.diag_rows) {
        SparseRow r = to_row(rowe);
        if (r.a.empty()) {
            if (r.b0 < -1e-9) {
                out.trivially_infeasible = true;
                out.infeasible_reason = "constant inequality violated";
                return out;
            }
            continue;
        }
        // Normalize row scale.
        double peak = std::abs(r.b0);
        for (const auto& [_, c] : r.a) peak = std::max(peak, std::abs(c));
        if (peak > 0.0) {
            const double inv = 1.0 / peak;
            r.b0 *= inv;
            for (auto& [_, c] : r.a) c *= inv;
        }
        out.diag.push_back(std::move(r));
    }

    for (auto& d : b.psd_drafts) {
        PsdBlockData blk;
        blk.dim = d.dim;
        blk.m0 = Matrix(d.dim, d.dim);
        std::map<std::uint32_t, std::vector<TriEntry>> per_var;
        double peak = 0.0;
        for (std::size_t i = 0; i < d.dim; ++i) {
            for (std::size_t j = i; j < d.dim; ++j) {
                const ExtExpr& e = d.entries[i * d.dim + j];
                blk.m0(i, j) = e.constant;
                blk.m0(j, i) = e.constant;
                peak = std::max(peak, std::abs(e.constant));
                for (const auto& [v, c] : e.terms) {
                    per_var[remap[v]].push_back(
                        {static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j), c});
                    peak = std::max(peak, std::abs(c));
                }
            }
        }
        if (per_var.empty()) {
            // Constant block: feasibility is decidable now.
            if (min_eig_sym(blk.m0) < -1e-9 * std::max(1.0, peak)) {
                out.trivially_infeasible = true;
                out.infeasible_reason = "constant PSD block is indefinite";
                return out;
            }
            continue;
        }
        if (peak > 0.0) {
            const double inv = 1.0 / peak;
            blk.m0.scale(inv);
            for (auto& [_, entries] : per_var)
                for (auto& t : entries) t.coef *= inv;
        }
        blk.vars.assign(per_var.begin(), per_var.end());
        out.psd.push_back(std::move(blk));
    }

    return out;
}

}  // namespace gdrc::conic::detail
