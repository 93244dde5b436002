#include "vaxopt/output.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vaxopt {

namespace {

void append_row(std::string& out, std::initializer_list<double> values) {
    bool first = true;
    for (const double v : values) {
        if (!first) out += ',';
        out += format_g17(v);
        first = false;
    }
    out += '\n';
}

}  // namespace

std::string format_g17(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string digest_bytes(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

void write_states_csv(const std::filesystem::path& path, const StateTrajectory& states) {
    std::string out = "t,S,V1,V2,E,I,R,N\n";
    for (std::size_t k = 0; k < states.size(); ++k) {
        const StatePoint& x = states[k];
        append_row(out, {states.grid().time_at(k), x.s, x.v1, x.v2, x.e, x.i, x.r, x.total()});
    }
    write_text_atomic(path, out);
}

void write_controls_csv(const std::filesystem::path& path, const ControlSchedule& controls) {
    std::string out = "t,u1,u2\n";
    for (std::size_t k = 0; k < controls.size(); ++k) {
        append_row(out, {controls.grid().time_at(k), controls[k].u1, controls[k].u2});
    }
    write_text_atomic(path, out);
}

void write_adjoints_csv(const std::filesystem::path& path, const AdjointTrajectory& adjoints) {
    std::string out = "t,lambda_S,lambda_V1,lambda_V2,lambda_E,lambda_I,lambda_R\n";
    for (std::size_t k = 0; k < adjoints.size(); ++k) {
        const AdjointPoint& l = adjoints[k];
        append_row(out,
                   {adjoints.grid().time_at(k), l.l_s, l.l_v1, l.l_v2, l.l_e, l.l_i, l.l_r});
    }
    write_text_atomic(path, out);
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json manifest_json(const RunManifest& manifest) {
    return nlohmann::json{
        {"command", manifest.command},
        {"label", manifest.label},
        {"timestamp", manifest.timestamp},
        {"config_digest", manifest.config_digest},
        {"resolved_config", manifest.resolved_config},
        {"outputs", manifest.outputs},
    };
}

nlohmann::json sweep_summary_json(const SweepResult& result,
                                  const ControlClassification& classification,
                                  const std::optional<ProcurementSplit>& split,
                                  double activity_threshold) {
    nlohmann::json doc{
        {"objective", result.objective},
        {"iterations", result.iterations},
        {"converged", result.converged},
        {"classification", to_string(classification.shape)},
        {"activity_threshold", activity_threshold},
    };
    doc["crossover_day"] = classification.crossover_day
                               ? nlohmann::json(*classification.crossover_day)
                               : nlohmann::json(nullptr);
    if (split) {
        doc["procurement"] = {{"share_v1", split->share_v1}, {"share_v2", split->share_v2}};
    } else {
        doc["procurement"] = nullptr;
    }
    return doc;
}

}  // namespace vaxopt
