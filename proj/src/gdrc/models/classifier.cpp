#include <cmath>

#include <json.hpp>

#include "gdrc/models.hpp"

namespace gdrc::models {

const char* model_name(ModelKind k) {
    switch (k) {
        case ModelKind::Svm: return "SVM";
        case ModelKind::Drc: return "DRC-SVM";
        case ModelKind::DrcMu: return "DRC-mu-SVM";
        case ModelKind::Gdrc: return "GDRC-SVM";
        default: return "GDRC-SVM-app";
    }
}

int TrainedClassifier::predict(const Vector& x) const {
    if (x.size() != w.size()) throw ShapeError("predict: dimension mismatch");
    return dot(w, x) + b > 0.0 ? 1 : -1;
}

namespace {

nlohmann::json vec_json(const Vector& v) { return nlohmann::json(v); }

Vector vec_from(const nlohmann::json& j) { return j.get<Vector>(); }

nlohmann::json mat_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix mat_from(const nlohmann::json& j) {
    const std::size_t r = j.size();
    const std::size_t c = r ? j[0].size() : 0;
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < c; ++k) m(i, k) = j[i][k].get<double>();
    return m;
}

ModelKind kind_from(const std::string& name) {
    if (name == "SVM") return ModelKind::Svm;
    if (name == "DRC-SVM") return ModelKind::Drc;
    if (name == "DRC-mu-SVM") return ModelKind::DrcMu;
    if (name == "GDRC-SVM") return ModelKind::Gdrc;
    if (name == "GDRC-SVM-app") return ModelKind::GdrcApp;
    throw ConfigError("unknown model kind '" + name + "'");
}

}  // namespace

std::string TrainedClassifier::to_json() const {
    nlohmann::json j;
    j["model_kind"] = model_name(kind);
    if (kind == ModelKind::GdrcApp) j["rank"] = app_rank;
    j["w"] = vec_json(w);
    j["b"] = b;
    j["xi"] = vec_json(xi);
    j["C"] = C;
    j["epsilon"] = epsilon;
    j["objective"] = objective;
    if (certificate) {
        nlohmann::json cert;
        for (int k = 0; k < 2; ++k) {
            nlohmann::json side;
            side["lambda"] = mat_json(certificate->lambda_mat[k]);
            side["q"] = vec_json(certificate->q[k]);
            side["t"] = certificate->t[k];
            side["r"] = certificate->r[k];
            side["tau"] = certificate->tau[k];
            nlohmann::json vs = nlohmann::json::array(), us = nlohmann::json::array();
            for (const auto& v : certificate->v[k]) vs.push_back(vec_json(v));
            for (const auto& u : certificate->u[k]) us.push_back(vec_json(u));
            side["v"] = std::move(vs);
            side["u"] = std::move(us);
            cert.push_back(std::move(side));
        }
        j["certificate"] = std::move(cert);
    }
    return j.dump(2);
}

TrainedClassifier TrainedClassifier::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    TrainedClassifier c;
    c.kind = kind_from(j.at("model_kind").get<std::string>());
    if (j.contains("rank")) c.app_rank = j["rank"].get<std::size_t>();
    c.w = vec_from(j.at("w"));
    c.b = j.at("b").get<double>();
    c.xi = vec_from(j.at("xi"));
    c.C = j.at("C").get<double>();
    c.epsilon = j.at("epsilon").get<double>();
    c.objective = j.at("objective").get<double>();
    if (j.contains("certificate")) {
        Certificate cert;
        for (int k = 0; k < 2; ++k) {
            const auto& side = j["certificate"][k];
            cert.lambda_mat[k] = mat_from(side.at("lambda"));
            cert.q[k] = vec_from(side.at("q"));
            cert.t[k] = side.at("t").get<double>();
            cert.r[k] = side.at("r").get<double>();
            cert.tau[k] = side.at("tau").get<double>();
            for (const auto& v : side.at("v")) cert.v[k].push_back(vec_from(v));
            for (const auto& u : side.at("u")) cert.u[k].push_back(vec_from(u));
        }
        c.certificate = std::move(cert);
    }
    return c;
}

TrainedClassifier CompiledModel::decode(const conic::Solution& sol) const {
    TrainedClassifier c;
    c.kind = kind;
    c.app_rank = rank;
    c.C = C;
    c.epsilon = epsilon;
    c.w = sol.vector("w");
    c.b = sol.scalar("b") - dot(c.w, centering);
    c.xi = sol.vector("xi");
    c.objective = sol.objective;

    if (kind == ModelKind::Gdrc || kind == ModelKind::GdrcApp) {
        Certificate cert;
        for (int k = 0; k < 2; ++k) {
            const std::string ks = std::to_string(k);
            cert.lambda_mat[k] = sol.sym_matrix("Lam[" + ks + "]");
            cert.q[k] = sol.vector("q[" + ks + "]");
            cert.t[k] = sol.scalar("t[" + ks + "]");
            cert.r[k] = sol.scalar("r[" + ks + "]");
            cert.tau[k] = sol.scalar("tau[" + ks + "]");
            for (std::size_t j = 0; j < m_per_class; ++j) {
                const std::string js = ks + "," + std::to_string(j);
                cert.v[k].push_back(sol.vector("v[" + js + "]"));
                cert.u[k].push_back(sol.vector("u[" + js + "]"));
            }
        }
        c.certificate = std::move(cert);
    }
    return c;
}

TrainResult train(const CompiledModel& model, double tolerance) {
    TrainResult out;
    out.solution = conic::solve(model.program, tolerance);
    if (out.solution.status == conic::Status::Optimal) {
        out.classifier = model.decode(out.solution);
        out.validation = conic::validate(model.program, out.solution, 1e-6);
    }
    return out;
}

}  // namespace gdrc::models
