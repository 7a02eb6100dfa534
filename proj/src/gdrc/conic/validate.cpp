#include "gdrc/conic/validate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gdrc/linalg.hpp"

namespace gdrc::conic {

ValidationReport validate(const Program& p, const Solution& s, double tol) {
    const Vector x = s.flat(p);
    ValidationReport rep;
    rep.tolerance = tol;

    for (const auto& c : p.constraints()) {
        double margin = 0.0;
        switch (c.kind) {
            case ConstraintKind::LinEq:
                margin = -std::abs(c.scalar.evaluate(x));
                rep.worst_eq = std::min(rep.worst_eq, margin);
                break;
            case ConstraintKind::LinIneq:
                margin = c.scalar.evaluate(x);
                rep.worst_ineq = std::min(rep.worst_ineq, margin);
                break;
            case ConstraintKind::Soc:
            case ConstraintKind::NormCap: {
                Vector arg(c.arg.size());
                for (std::size_t i = 0; i < c.arg.size(); ++i) arg[i] = c.arg[i].evaluate(x);
                const NormOrder q = c.kind == ConstraintKind::Soc ? NormOrder::Two : c.order;
                margin = c.bound.evaluate(x) - norm_value(arg, q);
                if (c.kind == ConstraintKind::Soc)
                    rep.worst_soc = std::min(rep.worst_soc, margin);
                else
                    rep.worst_cap = std::min(rep.worst_cap, margin);
                break;
            }
            case ConstraintKind::Psd: {
                Matrix m(c.psd_dim, c.psd_dim);
                for (std::size_t i = 0; i < c.psd_dim; ++i)
                    for (std::size_t j = 0; j < c.psd_dim; ++j)
                        m(i, j) = c.mat[i * c.psd_dim + j].evaluate(x);
                margin = min_eig_sym(m);
                rep.worst_psd_eig = std::min(rep.worst_psd_eig, margin);
                break;
            }
        }
        rep.checks.push_back({c.label, c.kind, margin});
    }

    rep.passed = rep.worst_eq >= -tol && rep.worst_ineq >= -tol && rep.worst_soc >= -tol &&
                 rep.worst_cap >= -tol && rep.worst_psd_eig >= -tol;
    return rep;
}

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    os << (passed ? "PASS" : "FAIL") << " (tol " << tolerance << "): "
       << "eq " << worst_eq << ", ineq " << worst_ineq << ", soc " << worst_soc << ", cap "
       << worst_cap << ", psd_eig " << worst_psd_eig;
    if (!passed) {
        for (const auto& c : checks) {
            if (c.margin < -tolerance) os << "\n  violated: " << c.label << " margin " << c.margin;
        }
    }
    return os.str();
}

}  // namespace gdrc::conic
