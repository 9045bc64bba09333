#include "fdrlab/cli.hpp"

#include "fdrlab/errors.hpp"
#include "fdrlab/format.hpp"
#include "fdrlab/kernels.hpp"
#include "fdrlab/pipeline.hpp"
#include "fdrlab/table.hpp"
#include "fdrlab/theory.hpp"
#include "fdrlab/tracefile.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

namespace fdrlab::cli {
namespace {

struct usage_error : error {
    using error::error;
};

struct ProfileFlags {
    std::optional<double> eps;
    std::optional<double> eps0;
    std::optional<double> delta;
    std::optional<double> freq;
    double ts = default_ts_seconds;

    void attach(CLI::App& cmd) {
        cmd.add_option("--eps", eps, "Stationary failure probability");
        cmd.add_option("--eps0", eps0, "Sinusoidal profile: mean failure probability");
        cmd.add_option("--delta", delta, "Sinusoidal profile: amplitude");
        cmd.add_option("--freq", freq, "Sinusoidal profile: frequency in Hz");
        cmd.add_option("--ts", ts, "Probing period in seconds")->capture_default_str();
    }

    bool given() const { return eps || eps0 || delta || freq; }

    FailureProfile build() const {
        if (eps && (eps0 || delta || freq)) {
            throw usage_error("--eps cannot be combined with --eps0/--delta/--freq");
        }
        if (eps) {
            return FailureProfile::stationary(*eps, ts);
        }
        if (eps0 && delta && freq) {
            return FailureProfile::sinusoidal(*eps0, *delta, *freq, ts);
        }
        if (eps0 && !delta && !freq) {
            return FailureProfile::stationary(*eps0, ts);
        }
        throw usage_error("a profile needs --eps, or --eps0 with --delta and --freq");
    }
};

double parse_alpha(const std::string& text, std::size_t m) {
    if (text == "auto") {
        return matched_alpha(m);
    }
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw usage_error("--alpha expects a number or 'auto', got '" + text + "'");
    }
    validate_alpha(v);
    return v;
}

ReportFormat parse_format(const std::string& text) {
    if (text == "csv") {
        return ReportFormat::csv;
    }
    if (text == "jsonl") {
        return ReportFormat::jsonl;
    }
    throw usage_error("--format expects 'csv' or 'jsonl'");
}

void emit_report(const std::vector<ResultRow>& rows, ReportFormat format, const std::string& out_path,
                 std::ostream& out) {
    if (out_path.empty()) {
        write_report(rows, format, out);
        return;
    }
    std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw io_error("cannot create report '" + out_path + "'");
    }
    write_report(rows, format, file);
}

int exit_code_for(const std::exception_ptr& ex) {
    try {
        std::rethrow_exception(ex);
    } catch (const usage_error&) {
        return usage;
    } catch (const io_error&) {
        return io;
    } catch (const cell_error& ce) {
        return ce.cause() ? exit_code_for(ce.cause()) : data;
    } catch (...) {
        return data;
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Link-quality (frame delivery ratio) estimation toolkit"};
    app.name("fdrlab");
    app.require_subcommand(1);
    std::function<void()> action;

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a synthetic outcome trace");
    ProfileFlags gen_profile;
    gen_profile.attach(*gen);
    std::size_t gen_n = 0;
    std::uint64_t gen_seed = 42;
    std::string gen_out;
    gen->add_option("--n", gen_n, "Number of outcomes")->required();
    gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
    gen->add_option("--out", gen_out, "Output trace file")->required();
    gen->callback([&] {
        action = [&] {
            const FailureProfile profile = gen_profile.build();
            const OutcomeSeries series = generate(profile, gen_n, gen_seed);
            write_trace_file(series, gen_out);
            out << "n=" << series.size() << "\n"
                << "failure_rate=" << format_number(series.failure_rate()) << "\n"
                << "source=" << series.source << "\n"
                << "out=" << gen_out << "\n";
        };
    });

    // estimate
    auto* est = app.add_subcommand("estimate", "Run SMA/EMA estimators over a trace and report error statistics");
    ProfileFlags est_profile;
    est_profile.attach(*est);
    std::string est_trace;
    std::size_t est_m = 0;
    std::string est_alpha = "auto";
    double est_y0 = default_y0;
    std::optional<std::size_t> est_skip;
    std::optional<std::size_t> est_skip_prefix;
    std::optional<std::size_t> est_skip_postfix;
    std::string est_format = "csv";
    std::string est_out;
    est->add_option("--trace", est_trace, "Input trace file")->required();
    est->add_option("--m", est_m, "SMA half reference window")->required();
    est->add_option("--alpha", est_alpha, "EMA smoothing factor or 'auto' (2/m)")->capture_default_str();
    est->add_option("--y0", est_y0, "EMA initial value")->capture_default_str();
    est->add_option("--skip", est_skip, "Samples excluded from statistics at both ends (default 100000)");
    est->add_option("--skip-prefix", est_skip_prefix, "Samples excluded at the start");
    est->add_option("--skip-postfix", est_skip_postfix, "Samples excluded at the end");
    est->add_option("--format", est_format, "csv or jsonl")->capture_default_str();
    est->add_option("--out", est_out, "Report file (default: stdout)");
    est->callback([&] {
        action = [&] {
            const ReportFormat format = parse_format(est_format);
            OutcomeSeries series = read_trace_file(est_trace);
            EstimatorConfig config;
            config.m = est_m;
            validate_window(config.m);
            config.alpha = parse_alpha(est_alpha, est_m);
            config.y0 = est_y0;
            const std::size_t skip = est_skip.value_or(default_skip);
            config.skip_prefix = est_skip_prefix.value_or(skip);
            config.skip_postfix = est_skip_postfix.value_or(skip);

            std::optional<FailureProfile> nominal;
            if (est_profile.given()) {
                est_profile.ts = series.ts_seconds;
                nominal = est_profile.build();
            } else {
                nominal = profile_from_source(series.source, series.ts_seconds);
            }
            const ResultRow row = estimate_row(series, config, nominal);
            emit_report({row}, format, est_out, out);

            std::ostream& note = est_out.empty() ? err : out;
            note << "n=" << series.size() << " n_stats=" << row.n_stats
                 << " eps_empirical=" << format_number(row.eps_empirical) << " m=" << row.m
                 << " alpha=" << format_number(row.alpha) << "\n"
                 << "mse_d=" << format_number(row.d.mse) << " theory_var_d=" << format_number(row.theory_var_d)
                 << " grade_d=" << grade_name(row.grade_d) << "\n"
                 << "mse_e=" << format_number(row.e.mse) << " theory_var_e=" << format_number(row.theory_var_e)
                 << " grade_e=" << grade_name(row.grade_e) << "\n";
            if (row.nominal_theory_var_d) {
                note << "nominal eps0=" << format_number(row.eps0)
                     << " theory_var_d=" << format_number(*row.nominal_theory_var_d)
                     << " theory_var_e=" << format_number(*row.nominal_theory_var_e) << "\n";
            }
        };
    });

    // theory
    auto* th = app.add_subcommand("theory", "Closed-form variances for a stationary channel");
    double th_eps = 0.0;
    std::size_t th_m = 0;
    std::string th_alpha = "auto";
    double th_y0 = default_y0;
    std::string th_format = "text";
    th->add_option("--eps", th_eps, "Failure probability")->required();
    th->add_option("--m", th_m, "SMA half reference window")->required();
    th->add_option("--alpha", th_alpha, "EMA smoothing factor or 'auto' (2/m)")->capture_default_str();
    th->add_option("--y0", th_y0, "EMA initial value")->capture_default_str();
    th->add_option("--format", th_format, "text or json")->capture_default_str();
    th->callback([&] {
        action = [&] {
            if (th_format != "text" && th_format != "json") {
                throw usage_error("--format expects 'text' or 'json'");
            }
            validate_window(th_m);
            const double alpha = parse_alpha(th_alpha, th_m);
            const TheoryReport r = stationary_report(th_eps, th_m, alpha, th_y0);
            const std::pair<const char*, double> fields[] = {
                {"eps", r.eps},     {"alpha", r.alpha}, {"y0", r.y0},
                {"var_x", r.var_x}, {"e_z", r.e_z},     {"var_z", r.var_z},
                {"var_u", r.var_u}, {"var_y_steady", r.var_y_steady},
                {"var_d", r.var_d}, {"var_e", r.var_e},
            };
            if (th_format == "json") {
                nlohmann::ordered_json j;
                j["m"] = r.m;
                for (const auto& [k, v] : fields) {
                    j[k] = v;
                }
                out << j.dump() << "\n";
            } else {
                out << "m=" << r.m << "\n";
                for (const auto& [k, v] : fields) {
                    out << k << "=" << format_number(v) << "\n";
                }
            }
        };
    });

    // table
    auto* tab = app.add_subcommand("table", "Reproduce a full result table by simulation");
    std::string tab_preset;
    std::string tab_spec;
    std::optional<std::size_t> tab_n_stats;
    std::optional<std::size_t> tab_skip;
    std::optional<std::uint64_t> tab_seed;
    std::size_t tab_threads = 0;
    std::string tab_format = "csv";
    std::string tab_out;
    bool tab_dump = false;
    auto* preset_opt = tab->add_option("--preset", tab_preset, "table1 (stationary) or table2 (sinusoidal)");
    auto* spec_opt = tab->add_option("--spec", tab_spec, "JSON table spec file");
    preset_opt->excludes(spec_opt);
    tab->add_option("--n-stats", tab_n_stats, "Statistics window length per cell");
    tab->add_option("--skip", tab_skip, "Prefix/postfix length per cell");
    tab->add_option("--seed", tab_seed, "Base seed");
    tab->add_option("--threads", tab_threads, "Worker threads (0 = all cores, capped by FDRLAB_THREADS)");
    tab->add_option("--format", tab_format, "csv or jsonl")->capture_default_str();
    tab->add_option("--out", tab_out, "Report file (default: stdout)");
    tab->add_flag("--dump-spec", tab_dump, "Print the resolved spec as JSON and exit");
    tab->callback([&] {
        action = [&] {
            const ReportFormat format = parse_format(tab_format);
            TableSpec spec;
            if (!tab_spec.empty()) {
                std::ifstream in(tab_spec, std::ios::binary);
                if (!in) {
                    throw io_error("cannot open table spec '" + tab_spec + "'");
                }
                std::stringstream buf;
                buf << in.rdbuf();
                spec = table_spec_from_json(buf.str());
            } else if (tab_preset == "table1") {
                spec = table1_spec();
            } else if (tab_preset == "table2") {
                spec = table2_spec();
            } else if (tab_preset.empty()) {
                throw usage_error("table needs --preset or --spec");
            } else {
                throw usage_error("unknown preset '" + tab_preset + "'");
            }
            if (tab_n_stats) {
                spec.n_stats = *tab_n_stats;
            }
            if (tab_skip) {
                spec.skip = *tab_skip;
            }
            if (tab_seed) {
                spec.base_seed = *tab_seed;
            }
            spec.validate();
            if (tab_dump) {
                out << table_spec_to_json(spec) << "\n";
                return;
            }
            emit_report(run_table(spec, tab_threads), format, tab_out, out);
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return usage;
    }

    try {
        if (action) {
            action();
        }
    } catch (const std::exception& ex) {
        err << "fdrlab: " << ex.what() << "\n";
        return exit_code_for(std::current_exception());
    }
    return ok;
}

} // namespace fdrlab::cli
