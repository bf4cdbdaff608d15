// Copyright 2026 The workfluct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "workfluct/contextuality.hpp"
#include "workfluct/errors.hpp"
#include "workfluct/fluctuation.hpp"
#include "workfluct/pointer_sim.hpp"
#include "workfluct/serialize.hpp"
#include "workfluct/tolerance.hpp"
#include "workfluct/work_stats.hpp"

namespace workfluct::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

double parse_number(const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(trim(text), &used);
        if (used != trim(text).size()) config_error("not a number: '" + text + "'");
        return v;
    } catch (const std::logic_error&) {
        config_error("not a number: '" + text + "'");
    }
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(trim(item));
    return parts;
}

std::string metadata_line(const RunConfig& cfg) {
    return "# config_digest=" + cfg.digest() + " seed=" + std::to_string(cfg.seed) + "\n";
}

json with_metadata(const RunConfig& cfg, json body) {
    body["config_digest"] = cfg.digest();
    body["seed"] = cfg.seed;
    return body;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

double config_tol(const RunConfig& cfg) {
    const json& d = cfg.document;
    return tol(d.contains("tol") ? d.at("tol").get<double>() : 1e-10);
}

ProtocolSpec protocol_from(const json& d) {
    for (const char* key : {"h_initial", "drive", "h_final"}) {
        if (!d.contains(key)) config_error(std::string("config is missing \"") + key + "\"");
    }
    return ProtocolSpec(io::hamiltonian_from_json(d.at("h_initial")), io::unitary_from_json(d.at("drive")),
                        io::hamiltonian_from_json(d.at("h_final")));
}

std::optional<ThermalConfig> beta_from(const json& d) {
    if (!d.contains("beta") || d.at("beta").is_null()) return std::nullopt;
    if (!d.at("beta").is_number()) config_error("\"beta\" must be a number");
    return ThermalConfig::make(d.at("beta").get<double>());
}

DensityMatrix state_from(const json& d, const ProtocolSpec* protocol) {
    if (!d.contains("state")) config_error("config is missing \"state\"");
    const json& st = d.at("state");
    if (!st.is_object()) config_error("\"state\" must be an object");
    if (st.contains("matrix")) return validate_density(io::matrix_from_json(st.at("matrix")));
    if (st.contains("pure")) return DensityMatrix::pure(io::vector_from_json(st.at("pure")));
    if (st.contains("thermal")) {
        if (protocol == nullptr) config_error("a thermal state needs a protocol");
        const json& th = st.at("thermal");
        const auto t = th.is_object() && th.contains("beta") ? ThermalConfig::make(th.at("beta").get<double>())
                                                             : beta_from(d);
        if (!t) config_error("a thermal state needs \"beta\"");
        return gibbs_state(protocol->h_initial(), *t);
    }
    config_error("\"state\" needs one of \"matrix\", \"pure\", \"thermal\"");
}

std::vector<double> s_values(const json& d, const std::vector<double>& fallback) {
    if (!d.contains("s")) return fallback;
    const json& s = d.at("s");
    if (s.is_string()) return parse_s_list(s.get<std::string>());
    if (s.is_number()) return {s.get<double>()};
    if (!s.is_array()) config_error("\"s\" must be a list or a logspace(...) string");
    std::vector<double> out;
    for (const auto& v : s) {
        if (!v.is_number()) config_error("\"s\" entries must be numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

// E = |i><i| of H(0) and Pi = U^dagger |j'><j'| U, or explicit projectors.
std::pair<Matrix, Matrix> projectors_from(const json& d, const std::optional<ProtocolSpec>& protocol) {
    if (d.contains("projectors")) {
        const json& pr = d.at("projectors");
        if (!pr.contains("e") || !pr.contains("pi")) config_error("\"projectors\" needs \"e\" and \"pi\"");
        return {io::matrix_from_json(pr.at("e")), io::matrix_from_json(pr.at("pi"))};
    }
    if (!d.contains("witness") || !protocol) config_error("need \"projectors\" or a protocol with \"witness\": {i, j}");
    const json& w = d.at("witness");
    const auto i = w.at("i").get<std::size_t>();
    const auto j = w.at("j").get<std::size_t>();
    if (i >= protocol->dim() || j >= protocol->dim()) config_error("witness level index out of range");
    return {protocol->h_initial().level_projector(i), protocol->final_projector(j)};
}

std::string suite_csv(const RunConfig& cfg, const std::vector<SuiteRow>& rows) {
    std::string out = metadata_line(cfg);
    out += "suite,index,seed,dim,beta,lhs,rhs,residual,rel_residual,upsilon,passed\n";
    for (const auto& r : rows) {
        out += r.suite + "," + std::to_string(r.index) + "," + std::to_string(r.seed) + "," + std::to_string(r.dim) +
               "," + io::format_double(r.beta) + "," + io::format_double(r.lhs) + "," + io::format_double(r.rhs) +
               "," + io::format_double(r.residual) + "," + io::format_double(r.rel_residual) + "," +
               (r.upsilon ? io::format_double(*r.upsilon) : std::string()) + "," + (r.passed ? "1" : "0") + "\n";
    }
    return out;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::string RunConfig::digest() const {
    char buf[17];
    json canonical = document;
    canonical.erase("out");
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(canonical.dump())));
    return buf;
}

std::vector<double> parse_s_list(const std::string& text) {
    const std::string t = trim(text);
    std::vector<double> out;
    if (t.rfind("logspace(", 0) == 0) {
        if (t.back() != ')') config_error("logspace(...) is missing ')'");
        const auto args = split(t.substr(9, t.size() - 10), ',');
        if (args.size() != 3) config_error("logspace needs (start, stop, count)");
        const double a = parse_number(args[0]);
        const double b = parse_number(args[1]);
        const double n = parse_number(args[2]);
        if (!(a > 0.0 && b > 0.0) || n < 1 || n != std::floor(n)) config_error("logspace needs a, b > 0 and integer n >= 1");
        const auto count = static_cast<std::size_t>(n);
        for (std::size_t k = 0; k < count; ++k) {
            const double f = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
            out.push_back(std::exp(std::log(a) + f * (std::log(b) - std::log(a))));
        }
    } else {
        for (const auto& part : split(t, ',')) out.push_back(parse_number(part));
    }
    for (double s : out) {
        if (!(s > 0.0) || !std::isfinite(s)) config_error("s values must be positive");
    }
    return out;
}

RunConfig load_config(const Overrides& o) {
    RunConfig cfg;
    if (o.config_path) {
        std::ifstream in(*o.config_path);
        if (!in) config_error("cannot open config file " + *o.config_path);
        try {
            cfg.document = json::parse(in);
        } catch (const json::parse_error& e) {
            config_error(std::string("malformed JSON: ") + e.what());
        }
        if (!cfg.document.is_object()) config_error("config must be a JSON object");
    }
    json& d = cfg.document;
    if (o.seed) d["seed"] = *o.seed;
    if (o.out) d["out"] = *o.out;
    if (o.kinds) d["kinds"] = split(*o.kinds, ',');
    if (o.s) d["s"] = *o.s;
    if (o.no_oracle) d["no_oracle"] = true;
    if (o.tol) d["tol"] = *o.tol;
    if (o.instances) d["instances"] = *o.instances;

    try {
        if (d.contains("seed")) cfg.seed = d.at("seed").get<std::uint64_t>();
        if (d.contains("out")) cfg.out_dir = d.at("out").get<std::string>();
        if (d.contains("tol") && !(d.at("tol").get<double>() > 0.0)) config_error("\"tol\" must be positive");
    } catch (const json::exception& e) {
        config_error(std::string("bad config field: ") + e.what());
    }
    return cfg;
}

// ---------------------------------------------------------------------------

int cmd_run(const RunConfig& cfg, Artifacts& out) {
    const json& d = cfg.document;
    const ProtocolSpec protocol = protocol_from(d);
    const DensityMatrix rho = state_from(d, &protocol);
    const auto beta = beta_from(d);

    std::vector<std::string> kinds = {"tpm", "weak"};
    if (d.contains("kinds")) kinds = d.at("kinds").get<std::vector<std::string>>();
    const bool merge = d.value("merge", false);

    auto emit = [&](const std::string& stem, WorkDistribution dist) {
        if (merge) dist = merge_by_work(dist, protocol.default_merge_tol());
        out.emplace_back(cfg.out_dir / (stem + ".csv"), metadata_line(cfg) + io::to_csv(dist));
        out.emplace_back(cfg.out_dir / (stem + ".json"), dump(with_metadata(cfg, io::to_json(dist))));
    };
    for (const auto& kind : kinds) {
        if (kind == "tpm") {
            emit("work_tpm", tpm_distribution(rho, protocol));
        } else if (kind == "weak") {
            emit("work_weak", weak_distribution(rho, protocol));
        } else if (kind == "finite_s") {
            const auto svals = s_values(d, {});
            if (svals.empty()) config_error("kind finite_s needs \"s\" values");
            for (double s : svals) emit("work_finite_s_" + io::format_double(s), finite_s_distribution(rho, protocol, s));
        } else {
            config_error("unknown distribution kind '" + kind + "'");
        }
    }

    if (beta) {
        const double t = config_tol(cfg);
        json report{{"beta", beta->beta},
                    {"delta_f", delta_f(protocol.h_initial(), protocol.h_final(), *beta)},
                    {"jarzynski", io::to_json(jarzynski_check(rho, protocol, *beta, t))}};
        if (!protocol.h_initial().degenerate()) {
            report["allahverdyan"] = io::to_json(allahverdyan_check(rho, protocol, *beta, t));
        }
        out.emplace_back(cfg.out_dir / "ft_report.json", dump(with_metadata(cfg, std::move(report))));
    }
    return kOk;
}

int cmd_scan_s(const RunConfig& cfg, Artifacts& out) {
    const json& d = cfg.document;
    std::optional<ProtocolSpec> protocol;
    if (d.contains("h_initial")) protocol.emplace(protocol_from(d));
    const DensityMatrix rho = state_from(d, protocol ? &*protocol : nullptr);
    const auto [e, pi] = projectors_from(d, protocol);
    const bool oracle = !d.value("no_oracle", false);
    const auto svals = s_values(d, parse_s_list("logspace(0.1,1000,50)"));

    std::string csv = metadata_line(cfg) + "s,p_d,p_minus,gap,condition_2c,qj_mean_x_closed";
    csv += oracle ? ",qj_mean_x_grid\n" : "\n";
    for (double s : svals) {
        const ContextualityReport r = lemma1_report(rho, e, pi, s);
        const auto closed = pointer::closed_form_pointer_mean(rho, e, pi, s);
        csv += io::format_double(s) + "," + io::format_double(r.p_d) + "," + io::format_double(r.p_minus) + "," +
               io::format_double(r.gap) + "," + (r.condition_2c ? "1" : "0") + "," +
               io::format_double(closed.q_j * closed.mean_x);
        if (oracle) {
            const auto grid = pointer::postselected_pointer_mean(rho, e, pi, pointer::PointerConfig::defaults(s));
            csv += "," + io::format_double(grid.q_j * grid.mean_x);
        }
        csv += "\n";
    }
    out.emplace_back(cfg.out_dir / "scan_s.csv", std::move(csv));
    return kOk;
}

int cmd_verify(const RunConfig& cfg, Artifacts& out) {
    const json& d = cfg.document;
    const double t = config_tol(cfg);
    std::vector<std::string> suites = {"jarzynski", "allahverdyan", "assumption2"};
    if (d.contains("suites")) suites = d.at("suites").get<std::vector<std::string>>();
    const std::optional<std::size_t> instances =
        d.contains("instances") ? std::optional(d.at("instances").get<std::size_t>()) : std::nullopt;

    std::vector<SuiteRow> all;
    std::vector<SuiteSummary> summaries;
    for (const auto& name : suites) {
        std::vector<SuiteRow> rows;
        if (name == "jarzynski") {
            rows = jarzynski_suite(instances.value_or(200), cfg.seed, t);
        } else if (name == "allahverdyan") {
            rows = allahverdyan_suite(instances.value_or(500), cfg.seed, t);
        } else if (name == "assumption2") {
            rows = assumption2_suite(instances.value_or(500), cfg.seed, t);
        } else {
            config_error("unknown suite '" + name + "'");
        }
        summaries.push_back(summarize(rows));
        all.insert(all.end(), rows.begin(), rows.end());
    }

    std::string summary = metadata_line(cfg) +
                          "suite,count,failures,max_abs_residual,max_rel_residual,max_thermal_upsilon_deviation\n";
    bool ok = true;
    for (const auto& s : summaries) {
        ok = ok && s.failures == 0;
        summary += s.suite + "," + std::to_string(s.count) + "," + std::to_string(s.failures) + "," +
                   io::format_double(s.max_abs_residual) + "," + io::format_double(s.max_rel_residual) + "," +
                   io::format_double(s.max_thermal_upsilon_deviation) + "\n";
    }
    out.emplace_back(cfg.out_dir / "verify.csv", suite_csv(cfg, all));
    out.emplace_back(cfg.out_dir / "verify_summary.csv", summary);
    std::cout << summary.substr(summary.find('\n') + 1);
    return ok ? kOk : kNumericError;
}

int cmd_witness(const RunConfig& cfg, Artifacts& out) {
    const json& d = cfg.document;
    std::optional<ProtocolSpec> protocol;
    if (d.contains("h_initial")) protocol.emplace(protocol_from(d));
    const auto [e, pi] = projectors_from(d, protocol);

    const NegativeState neg = find_negative_state(e, pi);
    json body{{"witness_min", neg.witness_min}, {"state", io::to_json(neg.state)}, {"rho", io::to_json(neg.rho.matrix())}};
    if (neg.witness_min < -1e-12) {
        const ThresholdResult th = s_threshold(neg.rho, e, pi);
        body["status"] = "witness";
        body["threshold"] = io::to_json(th);
        body["report_at_s_star"] = io::to_json(lemma1_report(neg.rho, e, pi, *th.s_star));
        body["report_at_10_s_star"] = io::to_json(lemma1_report(neg.rho, e, pi, 10.0 * *th.s_star));
    } else {
        body["status"] = "no witness";
        body["threshold"] = nullptr;
    }
    if (protocol && d.value("search", false) && d.contains("witness")) {
        const auto i = d.at("witness").at("i").get<std::size_t>();
        const auto j = d.at("witness").at("j").get<std::size_t>();
        const ProtocolSearchResult sr = search_witness_protocol(protocol->h_initial(), protocol->h_final(), i, j, cfg.seed);
        body["protocol_search"] = json{{"witness_min", sr.witness_min},
                                       {"unitary", io::to_json(sr.unitary)},
                                       {"evaluations", sr.evaluations},
                                       {"converged", sr.converged},
                                       {"heuristic", true}};
    }
    out.emplace_back(cfg.out_dir / "witness.json", dump(with_metadata(cfg, std::move(body))));
    return kOk;
}

void commit(const Artifacts& artifacts) {
    std::vector<fs::path> temps;
    for (const auto& [path, content] : artifacts) {
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        fs::path tmp = path;
        tmp += ".tmp";
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        f << content;
        f.close();
        if (!f) throw std::runtime_error("failed to write " + tmp.string());
        temps.push_back(std::move(tmp));
    }
    for (std::size_t k = 0; k < artifacts.size(); ++k) fs::rename(temps[k], artifacts[k].first);
}

int dispatch(const std::string& command, const Overrides& overrides) {
    auto fail = [](std::string_view kind, int code, std::string message) {
        std::string escaped;
        for (char c : message) {
            if (c == '\n' || c == '\r') {
                escaped += ' ';
            } else {
                if (c == '"' || c == '\\') escaped += '\\';
                escaped += c;
            }
        }
        std::cerr << "error kind=" << kind << " exit=" << code << " message=\"" << escaped << "\"\n";
        return code;
    };
    try {
        const RunConfig cfg = load_config(overrides);
        Artifacts artifacts;
        int code = kOk;
        if (command == "run") {
            code = cmd_run(cfg, artifacts);
        } else if (command == "scan-s") {
            code = cmd_scan_s(cfg, artifacts);
        } else if (command == "verify") {
            code = cmd_verify(cfg, artifacts);
        } else if (command == "witness") {
            code = cmd_witness(cfg, artifacts);
        } else {
            return fail("InvalidArgument", kConfigError, "unknown command " + command);
        }
        commit(artifacts);
        return code;
    } catch (const Error& e) {
        const int code = is_numerical(e.kind()) ? kNumericError : kConfigError;
        return fail(to_string(e.kind()), code, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail("ParseError", kConfigError, e.what());
    } catch (const std::exception& e) {
        return fail("Internal", kNumericError, e.what());
    }
}

}  // namespace workfluct::cli
