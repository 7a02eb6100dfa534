#pragma once

#include <map>
#include <string>
#include <vector>

#include "gdrc/conic/program.hpp"

namespace gdrc::conic {

enum class Status { Optimal, Infeasible, Unbounded, NumericalTrouble };

const char* status_name(Status s);

struct Residuals {
    double primal_feas = 0.0;
    double dual_feas = 0.0;
    double gap = 0.0;
};

struct Solution {
    Status status = Status::NumericalTrouble;
    std::map<std::string, Vector> values;  // block name -> values (svec for SymMatrix)
    double objective = 0.0;
    Residuals residuals;
    int iterations = 0;
    std::string solver;

    double scalar(const std::string& block) const;
    const Vector& vector(const std::string& block) const;
    // Rebuilds the dense symmetric matrix from svec storage.
    Matrix sym_matrix(const std::string& block) const;

    // Flat assignment in program order, for constraint re-evaluation.
    Vector flat(const Program& p) const;
};

}  // namespace gdrc::conic
