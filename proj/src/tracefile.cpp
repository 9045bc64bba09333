#include "fdrlab/tracefile.hpp"

#include "fdrlab/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace fdrlab {
namespace {

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
}

// "#key=value" with a non-empty key made of [a-z0-9_].
bool split_header(const std::string& line, std::string& key, std::string& value) {
    if (line.size() < 3 || line[0] != '#') {
        return false;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 1) {
        return false;
    }
    for (std::size_t k = 1; k < eq; ++k) {
        const char c = line[k];
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) {
            return false;
        }
    }
    key = line.substr(1, eq - 1);
    value = line.substr(eq + 1);
    return true;
}

std::uint64_t parse_count(const std::string& text, std::size_t line) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
        throw parse_error(line, "count must be a non-negative integer, got '" + text + "'");
    }
    return v;
}

double parse_double(const std::string& text, std::size_t line, const char* what) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
        throw parse_error(line, std::string(what) + " must be a number, got '" + text + "'");
    }
    return v;
}

} // namespace

OutcomeSeries read_trace(std::istream& in) {
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line)) {
        throw parse_error(1, "empty input, expected '" + std::string(trace_magic) + "'");
    }
    strip_cr(line);
    if (line != trace_magic) {
        if (line.rfind("#fdrtrace v", 0) == 0) {
            throw version_error("unsupported trace version '" + line.substr(11) + "'");
        }
        throw parse_error(1, "expected '" + std::string(trace_magic) + "'");
    }

    TraceHeader header;
    bool have_ts = false;
    bool have_count = false;
    bool in_body = false;
    OutcomeSeries series;
    std::string key;
    std::string value;

    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (!in_body) {
            if (split_header(line, key, value)) {
                if (key == "ts") {
                    header.ts_seconds = parse_double(value, lineno, "ts");
                    if (!(header.ts_seconds > 0.0)) {
                        throw parse_error(lineno, "ts must be positive");
                    }
                    have_ts = true;
                } else if (key == "count") {
                    header.count = parse_count(value, lineno);
                    have_count = true;
                } else if (key == "source") {
                    header.source = value;
                }
                continue;
            }
            if (!have_ts || !have_count) {
                throw parse_error(lineno, std::string("header block ends without '") +
                                              (have_ts ? "#count" : "#ts") + "'");
            }
            in_body = true;
            series.outcomes.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(header.count, 1ULL << 28)));
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (line.size() == 1 && (line[0] == '0' || line[0] == '1')) {
            series.outcomes.push_back(static_cast<std::uint8_t>(line[0] - '0'));
            continue;
        }
        throw parse_error(lineno, "expected outcome '0' or '1', got '" + line + "'");
    }
    if (!in_body && (!have_ts || !have_count)) {
        throw parse_error(lineno, std::string("trace header lacks '") + (have_ts ? "#count" : "#ts") + "'");
    }
    if (series.outcomes.size() != header.count) {
        throw integrity_error("trace declares " + std::to_string(header.count) + " outcomes but contains " +
                              std::to_string(series.outcomes.size()));
    }
    series.ts_seconds = header.ts_seconds;
    series.source = header.source;
    return series;
}

void write_trace(const OutcomeSeries& series, std::ostream& out) {
    std::string source = series.source;
    std::replace(source.begin(), source.end(), '\n', ' ');
    std::replace(source.begin(), source.end(), '\r', ' ');

    std::string buf;
    buf.reserve(128 + 2 * series.size());
    buf += trace_magic;
    buf += "\n#ts=" + format_number(series.ts_seconds);
    buf += "\n#count=" + std::to_string(series.size());
    buf += "\n#source=" + source + "\n";
    for (std::uint8_t x : series.outcomes) {
        buf += x ? "1\n" : "0\n";
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    out.flush();
    if (!out) {
        throw io_error("failed to write trace");
    }
}

OutcomeSeries read_trace_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open trace '" + path.string() + "'");
    }
    return read_trace(in);
}

void write_trace_file(const OutcomeSeries& series, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw io_error("cannot create trace '" + path.string() + "'");
    }
    write_trace(series, out);
}

std::optional<FailureProfile> profile_from_source(const std::string& source, double ts_seconds) {
    std::istringstream is(source);
    std::string token;
    if (!(is >> token) || token != "synthetic") {
        return std::nullopt;
    }
    std::map<std::string, std::string> kv;
    while (is >> token) {
        const auto eq = token.find('=');
        if (eq != std::string::npos) {
            kv[token.substr(0, eq)] = token.substr(eq + 1);
        }
    }
    auto number = [&](const char* k) -> std::optional<double> {
        auto it = kv.find(k);
        if (it == kv.end()) {
            return std::nullopt;
        }
        double v = 0.0;
        const auto& s = it->second;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
            return std::nullopt;
        }
        return v;
    };
    try {
        const auto kind = kv.find("profile");
        if (kind == kv.end()) {
            return std::nullopt;
        }
        if (kind->second == "stationary") {
            if (auto eps = number("eps0")) {
                return FailureProfile::stationary(*eps, ts_seconds);
            }
        } else if (kind->second == "sinusoidal") {
            auto eps0 = number("eps0");
            auto delta = number("delta_eps");
            auto freq = number("freq_hz");
            if (eps0 && delta && freq) {
                return FailureProfile::sinusoidal(*eps0, *delta, *freq, ts_seconds);
            }
        }
    } catch (const validation_error&) {
        return std::nullopt;
    }
    return std::nullopt;
}

namespace {

nlohmann::ordered_json row_to_json(const ResultRow& r) {
    nlohmann::ordered_json j;
    j["profile"] = r.profile;
    j["eps0"] = r.eps0;
    j["delta_eps"] = r.delta_eps;
    j["freq_hz"] = r.freq_hz;
    j["ts"] = r.ts;
    j["m"] = r.m;
    j["alpha"] = r.alpha;
    j["n_stats"] = r.n_stats;
    j["mu_e"] = r.e.mean;
    j["var_e"] = r.e.var;
    j["mse_e"] = r.e.mse;
    j["theory_var_e"] = r.theory_var_e;
    j["mae_e"] = r.e.mae;
    j["grade_e"] = grade_name(r.grade_e);
    j["mu_d"] = r.d.mean;
    j["var_d"] = r.d.var;
    j["mse_d"] = r.d.mse;
    j["theory_var_d"] = r.theory_var_d;
    j["mae_d"] = r.d.mae;
    j["grade_d"] = grade_name(r.grade_d);
    j["eps_empirical"] = r.eps_empirical;
    if (r.nominal_theory_var_e) {
        j["nominal_theory_var_e"] = *r.nominal_theory_var_e;
    }
    if (r.nominal_theory_var_d) {
        j["nominal_theory_var_d"] = *r.nominal_theory_var_d;
    }
    return j;
}

ResultRow row_from_json(const nlohmann::json& j) {
    ResultRow r;
    r.profile = j.at("profile").get<std::string>();
    r.eps0 = j.at("eps0").get<double>();
    r.delta_eps = j.at("delta_eps").get<double>();
    r.freq_hz = j.at("freq_hz").get<double>();
    r.ts = j.at("ts").get<double>();
    r.m = j.at("m").get<std::uint64_t>();
    r.alpha = j.at("alpha").get<double>();
    r.n_stats = j.at("n_stats").get<std::uint64_t>();
    r.e.mean = j.at("mu_e").get<double>();
    r.e.var = j.at("var_e").get<double>();
    r.e.mse = j.at("mse_e").get<double>();
    r.e.mae = j.at("mae_e").get<double>();
    r.e.count = r.n_stats;
    r.theory_var_e = j.at("theory_var_e").get<double>();
    r.grade_e = parse_grade(j.at("grade_e").get<std::string>());
    r.d.mean = j.at("mu_d").get<double>();
    r.d.var = j.at("var_d").get<double>();
    r.d.mse = j.at("mse_d").get<double>();
    r.d.mae = j.at("mae_d").get<double>();
    r.d.count = r.n_stats;
    r.theory_var_d = j.at("theory_var_d").get<double>();
    r.grade_d = parse_grade(j.at("grade_d").get<std::string>());
    r.eps_empirical = j.value("eps_empirical", 0.0);
    if (j.contains("nominal_theory_var_e")) {
        r.nominal_theory_var_e = j.at("nominal_theory_var_e").get<double>();
    }
    if (j.contains("nominal_theory_var_d")) {
        r.nominal_theory_var_d = j.at("nominal_theory_var_d").get<double>();
    }
    return r;
}

} // namespace

void write_report(const std::vector<ResultRow>& rows, ReportFormat format, std::ostream& out) {
    std::string buf;
    if (format == ReportFormat::csv) {
        buf += csv_columns;
        buf += '\n';
        for (const auto& r : rows) {
            const std::string fields[] = {
                r.profile,
                format_number(r.eps0),
                format_number(r.delta_eps),
                format_number(r.freq_hz),
                format_number(r.ts),
                std::to_string(r.m),
                format_number(r.alpha),
                std::to_string(r.n_stats),
                format_number(r.e.mean),
                format_number(r.e.var),
                format_number(r.e.mse),
                format_number(r.theory_var_e),
                format_number(r.e.mae),
                std::string(grade_name(r.grade_e)),
                format_number(r.d.mean),
                format_number(r.d.var),
                format_number(r.d.mse),
                format_number(r.theory_var_d),
                format_number(r.d.mae),
                std::string(grade_name(r.grade_d)),
            };
            bool first = true;
            for (const auto& f : fields) {
                if (!first) {
                    buf += ',';
                }
                buf += f;
                first = false;
            }
            buf += '\n';
        }
    } else {
        for (const auto& r : rows) {
            buf += row_to_json(r).dump();
            buf += '\n';
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    out.flush();
    if (!out) {
        throw io_error("failed to write report");
    }
}

std::vector<ResultRow> read_report_jsonl(std::istream& in) {
    std::vector<ResultRow> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) {
            continue;
        }
        try {
            rows.push_back(row_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& ex) {
            throw parse_error(lineno, ex.what());
        }
    }
    return rows;
}

} // namespace fdrlab
