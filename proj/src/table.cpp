#include "fdrlab/table.hpp"

#include "fdrlab/errors.hpp"
#include "fdrlab/theory.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <set>
#include <string_view>
#include <thread>

namespace fdrlab {

FailureProfile ProfileParams::build() const {
    switch (kind) {
    case ProfileKind::stationary:
        return FailureProfile::stationary(eps0, ts_seconds);
    case ProfileKind::sinusoidal:
        return FailureProfile::sinusoidal(eps0, delta_eps, freq_hz, ts_seconds);
    case ProfileKind::empirical:
        break;
    }
    throw validation_error("profiles", "empirical profiles cannot be used in a table spec");
}

double TableSpec::alpha_for(std::size_t window_index) const {
    if (alpha_policy == AlphaPolicy::matched) {
        return matched_alpha(windows.at(window_index));
    }
    return alphas.at(window_index);
}

void TableSpec::validate() const {
    if (profiles.empty()) {
        throw validation_error("profiles", "at least one profile is required");
    }
    if (windows.empty()) {
        throw validation_error("windows", "at least one window is required");
    }
    for (const auto& p : profiles) {
        (void)p.build();
    }
    for (std::size_t m : windows) {
        validate_window(m);
    }
    if (alpha_policy == AlphaPolicy::explicit_list) {
        if (alphas.size() != windows.size()) {
            throw validation_error("alphas", "explicit alpha list must have one entry per window");
        }
        for (double a : alphas) {
            validate_alpha(a);
        }
    } else {
        for (std::size_t m : windows) {
            (void)matched_alpha(m);
        }
    }
    if (n_stats < 1) {
        throw validation_error("n_stats", "statistics window must hold at least one sample");
    }
    if (!(y0 >= 0.0 && y0 <= 1.0)) {
        throw validation_error("y0", "initial value must lie in [0, 1]");
    }
}

namespace {

const std::vector<std::size_t> grid_windows{10, 100, 1000, 10000};

} // namespace

TableSpec table1_spec() {
    TableSpec spec;
    for (double eps : {0.1, 0.2, 0.4}) {
        spec.profiles.push_back(ProfileParams{ProfileKind::stationary, eps, 0.0, 0.0, default_ts_seconds});
    }
    spec.windows = grid_windows;
    return spec;
}

TableSpec table2_spec() {
    TableSpec spec;
    for (double f : {0.0001, 0.001}) {
        for (double delta : {0.005, 0.05}) {
            spec.profiles.push_back(ProfileParams{ProfileKind::sinusoidal, 0.1, delta, f, default_ts_seconds});
        }
    }
    spec.windows = grid_windows;
    return spec;
}

TableSpec table_spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
        throw parse_error(0, std::string("table spec: ") + ex.what());
    }
    if (!j.is_object()) {
        throw validation_error("table spec", "expected a JSON object");
    }
    static const std::set<std::string> known{"profiles", "windows", "alpha_policy", "alphas",
                                             "n_stats",  "skip",    "base_seed",    "y0"};
    for (const auto& [key, _] : j.items()) {
        if (!known.contains(key)) {
            throw validation_error(key, "unknown table spec field");
        }
    }

    TableSpec spec;
    try {
        for (const auto& p : j.at("profiles")) {
            ProfileParams pp;
            const std::string kind = p.value("kind", "stationary");
            if (kind == "stationary") {
                pp.kind = ProfileKind::stationary;
                pp.eps0 = p.contains("eps") ? p.at("eps").get<double>() : p.at("eps0").get<double>();
            } else if (kind == "sinusoidal") {
                pp.kind = ProfileKind::sinusoidal;
                pp.eps0 = p.at("eps0").get<double>();
                pp.delta_eps = p.at("delta_eps").get<double>();
                pp.freq_hz = p.at("freq_hz").get<double>();
            } else {
                throw validation_error("profiles", "unknown profile kind '" + kind + "'");
            }
            pp.ts_seconds = p.value("ts", default_ts_seconds);
            spec.profiles.push_back(pp);
        }
        spec.windows = j.at("windows").get<std::vector<std::size_t>>();
        const std::string policy = j.value("alpha_policy", "matched");
        if (policy == "matched") {
            spec.alpha_policy = AlphaPolicy::matched;
        } else if (policy == "explicit") {
            spec.alpha_policy = AlphaPolicy::explicit_list;
            spec.alphas = j.at("alphas").get<std::vector<double>>();
        } else {
            throw validation_error("alpha_policy", "expected 'matched' or 'explicit'");
        }
        spec.n_stats = j.value("n_stats", spec.n_stats);
        spec.skip = j.value("skip", spec.skip);
        spec.base_seed = j.value("base_seed", spec.base_seed);
        spec.y0 = j.value("y0", spec.y0);
    } catch (const nlohmann::json::exception& ex) {
        throw validation_error("table spec", ex.what());
    }
    spec.validate();
    return spec;
}

std::string table_spec_to_json(const TableSpec& spec) {
    nlohmann::ordered_json j;
    j["profiles"] = nlohmann::ordered_json::array();
    for (const auto& p : spec.profiles) {
        nlohmann::ordered_json pj;
        if (p.kind == ProfileKind::sinusoidal) {
            pj["kind"] = "sinusoidal";
            pj["eps0"] = p.eps0;
            pj["delta_eps"] = p.delta_eps;
            pj["freq_hz"] = p.freq_hz;
        } else {
            pj["kind"] = "stationary";
            pj["eps0"] = p.eps0;
        }
        pj["ts"] = p.ts_seconds;
        j["profiles"].push_back(pj);
    }
    j["windows"] = spec.windows;
    j["alpha_policy"] = spec.alpha_policy == AlphaPolicy::matched ? "matched" : "explicit";
    if (spec.alpha_policy == AlphaPolicy::explicit_list) {
        j["alphas"] = spec.alphas;
    }
    j["n_stats"] = spec.n_stats;
    j["skip"] = spec.skip;
    j["base_seed"] = spec.base_seed;
    j["y0"] = spec.y0;
    return j.dump(2);
}

std::uint64_t cell_seed(std::uint64_t base_seed, std::uint64_t ordinal) {
    // splitmix64 finalizer: a bijection, so distinct ordinals never collide.
    std::uint64_t z = ordinal + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return base_seed ^ z;
}

ResultRow estimate_row(const OutcomeSeries& outcomes, const EstimatorConfig& config,
                       const std::optional<FailureProfile>& nominal) {
    const ErrorStatistics stats = evaluate_estimators(outcomes, config);
    const double eps_hat = outcomes.failure_rate();

    ResultRow row;
    row.ts = outcomes.ts_seconds;
    row.m = config.m;
    row.alpha = config.alpha;
    row.n_stats = stats.d.count;
    row.e = stats.e;
    row.d = stats.d;
    row.eps_empirical = eps_hat;
    row.theory_var_e = stationary_ema_error_variance(eps_hat, config.m, config.alpha);
    row.theory_var_d = stationary_sma_error_variance(eps_hat, config.m);
    row.grade_e = grade_cell(row.e.mse, row.theory_var_e).grade;
    row.grade_d = grade_cell(row.d.mse, row.theory_var_d).grade;

    if (nominal && nominal->kind() != ProfileKind::empirical) {
        row.profile = nominal->name();
        row.eps0 = nominal->eps0();
        row.delta_eps = nominal->delta_eps();
        row.freq_hz = nominal->freq_hz();
        row.ts = nominal->ts_seconds();
        row.nominal_theory_var_e = stationary_ema_error_variance(nominal->eps0(), config.m, config.alpha);
        row.nominal_theory_var_d = stationary_sma_error_variance(nominal->eps0(), config.m);
    } else {
        row.profile = nominal ? nominal->name() : "external";
        row.eps0 = eps_hat;
    }
    return row;
}

ResultRow run_cell(const TableSpec& spec, std::size_t ordinal) {
    const std::size_t pi = ordinal / spec.windows.size();
    const std::size_t wi = ordinal % spec.windows.size();
    const FailureProfile profile = spec.profiles.at(pi).build();

    EstimatorConfig config;
    config.m = spec.windows[wi];
    config.alpha = spec.alpha_for(wi);
    config.y0 = spec.y0;
    config.skip_prefix = spec.skip;
    config.skip_postfix = spec.skip;

    const std::size_t n = spec.skip + spec.n_stats + spec.skip;
    const OutcomeSeries outcomes = generate(profile, n, cell_seed(spec.base_seed, ordinal));
    return estimate_row(outcomes, config, profile);
}

std::size_t resolve_threads(std::size_t requested) {
    std::size_t n = requested;
    if (n == 0) {
        n = std::max(1u, std::thread::hardware_concurrency());
    }
    if (const char* cap = std::getenv("FDRLAB_THREADS")) {
        std::size_t v = 0;
        const std::string_view s(cap);
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec == std::errc{} && res.ptr == s.data() + s.size() && v > 0) {
            n = std::min(n, v);
        }
    }
    return std::max<std::size_t>(1, n);
}

namespace {

std::string describe_cell(const TableSpec& spec, std::size_t ordinal) {
    const auto& p = spec.profiles.at(ordinal / spec.windows.size());
    std::string s = "(profile " + std::to_string(ordinal / spec.windows.size()) + ", eps0=" +
                    format_number(p.eps0);
    if (p.kind == ProfileKind::sinusoidal) {
        s += ", delta_eps=" + format_number(p.delta_eps) + ", freq_hz=" + format_number(p.freq_hz);
    }
    s += ", m=" + std::to_string(spec.windows.at(ordinal % spec.windows.size())) + ")";
    return s;
}

} // namespace

std::vector<ResultRow> run_table(const TableSpec& spec, std::size_t threads) {
    spec.validate();
    const std::size_t cells = spec.cell_count();
    std::vector<ResultRow> rows(cells);
    const std::size_t workers = std::min(resolve_threads(threads), cells);

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex failure_mutex;
    std::size_t failed_ordinal = cells;
    std::exception_ptr failure;

    auto work = [&] {
        while (!failed.load()) {
            const std::size_t ordinal = next.fetch_add(1);
            if (ordinal >= cells) {
                return;
            }
            try {
                rows[ordinal] = run_cell(spec, ordinal);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (ordinal < failed_ordinal) {
                    failed_ordinal = ordinal;
                    failure = std::current_exception();
                }
                failed.store(true);
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) {
            pool.emplace_back(work);
        }
    }

    if (failure) {
        std::string what = describe_cell(spec, failed_ordinal);
        try {
            std::rethrow_exception(failure);
        } catch (const std::exception& ex) {
            what += ": " + std::string(ex.what());
        } catch (...) {
            what += ": unknown failure";
        }
        throw cell_error(failed_ordinal, what, failure);
    }
    return rows;
}

} // namespace fdrlab
