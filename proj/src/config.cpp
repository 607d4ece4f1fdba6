#include "slugflow/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace slugflow {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known,
                    const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
}

}  // namespace

std::string SolveConfig::to_json() const {
    std::ostringstream os;
    os << "{\n";
    os << "  \"M0\": " << fmt(M0) << ",\n";
    os << "  \"m\": " << fmt(m) << ",\n";
    os << "  \"Gamma\": " << fmt(Gamma) << ",\n";
    os << "  \"beta\": " << fmt(beta) << ",\n";
    os << "  \"t_inj\": " << fmt(t_inj) << ",\n";
    os << "  \"nx\": " << nx << ",\n";
    os << "  \"nt\": " << nt << ",\n";
    os << "  \"x_max\": " << fmt(x_max) << ",\n";
    os << "  \"t_max\": " << fmt(t_max) << ",\n";
    os << "  \"root_tol\": " << fmt(root_tol) << ",\n";
    os << "  \"ode_rtol\": " << fmt(ode_rtol) << ",\n";
    os << "  \"n_ta\": " << n_ta << ",\n";
    os << "  \"n_jouguet\": " << n_jouguet << ",\n";
    os << "  \"output_dir\": \"" << output_dir << "\"";
    if (fv) {
        os << ",\n  \"fv\": {\n    \"eps\": [";
        for (std::size_t i = 0; i < fv->eps.size(); ++i)
            os << (i ? ", " : "") << fmt(fv->eps[i]);
        os << "],\n";
        os << "    \"dx_over_eps\": " << fmt(fv->dx_over_eps) << ",\n";
        os << "    \"cfl\": " << fmt(fv->cfl) << ",\n";
        os << "    \"length\": " << fmt(fv->length) << ",\n";
        os << "    \"t_final\": " << fmt(fv->t_final) << "\n  }";
    }
    os << "\n}\n";
    return os.str();
}

SolveConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
    }
    reject_unknown(j, {"M0", "m", "Gamma", "beta", "t_inj", "nx", "nt", "x_max", "t_max",
                       "root_tol", "ode_rtol", "n_ta", "n_jouguet", "output_dir", "fv"},
                   "top level");
    SolveConfig cfg;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("M0", cfg.M0);
    get("m", cfg.m);
    get("Gamma", cfg.Gamma);
    get("beta", cfg.beta);
    get("t_inj", cfg.t_inj);
    get("nx", cfg.nx);
    get("nt", cfg.nt);
    get("x_max", cfg.x_max);
    get("t_max", cfg.t_max);
    get("root_tol", cfg.root_tol);
    get("ode_rtol", cfg.ode_rtol);
    get("n_ta", cfg.n_ta);
    get("n_jouguet", cfg.n_jouguet);
    get("output_dir", cfg.output_dir);
    if (j.contains("fv")) {
        const auto& f = j.at("fv");
        reject_unknown(f, {"eps", "dx_over_eps", "cfl", "length", "t_final"}, "fv block");
        FVBlock blk;
        if (f.contains("eps")) blk.eps = f.at("eps").get<std::vector<double>>();
        if (f.contains("dx_over_eps")) blk.dx_over_eps = f.at("dx_over_eps").get<double>();
        if (f.contains("cfl")) blk.cfl = f.at("cfl").get<double>();
        if (f.contains("length")) blk.length = f.at("length").get<double>();
        if (f.contains("t_final")) blk.t_final = f.at("t_final").get<double>();
        cfg.fv = blk;
    }

    if (!(cfg.t_inj > 0.0)) throw std::invalid_argument("config: t_inj must be positive");
    if (!(cfg.root_tol > 0.0)) throw std::invalid_argument("config: root_tol must be positive");
    if (!(cfg.ode_rtol > 0.0)) throw std::invalid_argument("config: ode_rtol must be positive");
    if (cfg.nx <= 0 || cfg.nt <= 0) throw std::invalid_argument("config: grid sizes must be positive");
    if (cfg.n_ta < 8 || cfg.n_jouguet < 8)
        throw std::invalid_argument("config: family sizes must be at least 8");
    if (cfg.fv) {
        if (cfg.fv->eps.empty()) throw std::invalid_argument("config: fv.eps must be nonempty");
        for (double e : cfg.fv->eps)
            if (!(e > 0.0)) throw std::invalid_argument("config: fv.eps entries must be positive");
        if (!(cfg.fv->dx_over_eps > 0.0))
            throw std::invalid_argument("config: fv.dx_over_eps must be positive");
    }
    return cfg;
}

SolveConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace slugflow
