// Command-line driver: deterministic experiment cells over the library
// modules, CSV/JSON outputs, documented exit codes. Every numeric flag is
// parsed as an exact decimal string before any float conversion, and rerunning
// a command with the same flags reproduces its output files byte for byte.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "psb/acceptance.hpp"
#include "psb/cli_config.hpp"
#include "psb/version.hpp"

namespace {

using nlohmann::json;

double dec(const std::string& s) { return psb::parse_decimal(s).value(); }

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

uint64_t to_u64(const std::string& s) {
    try {
        size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw psb::domain_error("not an unsigned integer: '" + s + "'");
    }
}

std::vector<uint64_t> parse_u64_list(const std::string& s) {
    std::vector<uint64_t> out;
    for (const std::string& tok : split(s, ','))
        if (!tok.empty()) out.push_back(to_u64(tok));
    if (out.empty()) throw psb::domain_error("empty integer list");
    return out;
}

// "17", "100..120", or a comma list mixing both.
std::vector<long long> parse_n_tokens(const std::string& s) {
    std::vector<long long> out;
    for (const std::string& tok : split(s, ',')) {
        if (tok.empty()) continue;
        const size_t dots = tok.find("..");
        if (dots == std::string::npos) {
            out.push_back((long long)to_u64(tok));
        } else {
            const uint64_t lo = to_u64(tok.substr(0, dots));
            const uint64_t hi = to_u64(tok.substr(dots + 2));
            if (lo > hi) throw psb::domain_error("descending range: '" + tok + "'");
            for (uint64_t n = lo; n <= hi; ++n) out.push_back((long long)n);
        }
    }
    if (out.empty()) throw psb::domain_error("empty n list");
    return out;
}

std::vector<std::pair<uint64_t, uint64_t>> parse_windows(const std::string& s) {
    std::vector<std::pair<uint64_t, uint64_t>> out;
    for (const std::string& tok : split(s, ',')) {
        if (tok.empty()) continue;
        const size_t colon = tok.find(':');
        if (colon == std::string::npos)
            throw psb::domain_error("window must be lo:hi, got '" + tok + "'");
        out.emplace_back(to_u64(tok.substr(0, colon)), to_u64(tok.substr(colon + 1)));
    }
    if (out.empty()) throw psb::domain_error("empty window list");
    return out;
}

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// All CSV emissions open with the full run configuration as a JSON comment
// line; the line carries no timestamp, so files stay byte-identical.
void emit_csv(std::ostream& os, const psb::experiment_config& cfg, const std::string& header,
              const std::vector<std::string>& rows) {
    os << "# " << psb::config_to_json(cfg) << "\n" << header << "\n";
    for (const std::string& r : rows) os << r << "\n";
}

void write_csv(const std::string& path, const psb::experiment_config& cfg,
               const std::string& header, const std::vector<std::string>& rows) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw psb::resource_error("cannot open output file '" + path + "'");
    emit_csv(f, cfg, header, rows);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw psb::resource_error("cannot open output file '" + path + "'");
    f << text;
}

// Flag bundles, one per subcommand; values stay strings until the handler
// converts them through exact-decimal parsing.
struct spec_opts {
    std::string c = "1";
    int k = 1;
    bool primes = false;

    psb::sequence_spec make() const {
        return psb::sequence_spec(psb::parse_decimal(c), k, primes);
    }
};

struct params_opts {
    spec_opts spec;
};

struct gen_opts {
    spec_opts spec;
    uint64_t xmax = 0;
    std::string out;
};

struct repcount_opts {
    spec_opts spec;
    int h = 2;
    uint64_t N = 0;
    std::string omega; // empty: exact integer representation counts
    bool log_weight = false;
    std::string out;
};

struct hua_opts {
    spec_opts spec;
    int h = 2;
    std::string xgrid;
    std::string out;
};

struct singular_opts {
    int k = 1;
    int h = 2;
    long long Q = 500;
    bool prime = false;
    std::string n;
    std::string out;
};

struct quadrature_opts {
    spec_opts spec;
    int h = 2;
    std::string omega = "0";
    bool log_weight = false;
    std::string ngrid;
    uint64_t M = 0; // 0: minimal alias-free grid h*N+1
    std::string out;
};

struct major_opts {
    std::string c = "1.5";
    std::string omega = "0.5";
    std::string nu = "0.1";
    std::string ngrid;
    std::string out;
};

struct minor_opts {
    std::string c = "1.5";
    std::string omega = "0.2";
    std::string nu = "0.1";
    int grid_factor = 8;
    int top_divisor = 2;
    std::string ngrid;
    std::string out;
};

struct transfer_opts {
    int k = 1;
    std::string c = "1.2";
    std::string xgrid;
    bool log_weight = false;
    uint64_t grid_mult = 4;
    std::string out;
};

struct subbase_opts {
    spec_opts spec;
    std::string F = "1,0.5,0,0";
    int h = 5;
    uint64_t xmax = 0;
    uint64_t seed = 1;
    std::string lambda = "1";
    std::string windows;
    int trials = 48;
    std::string out;
};

struct accept_opts {
    std::string profile = "quick";
    std::string out;
    std::string inject_noise = "0";
};

psb::reg_var_fn parse_F(const std::string& s) {
    const std::vector<std::string> parts = split(s, ',');
    if (parts.size() != 4)
        throw psb::domain_error("--F expects C,kappa,logPow,loglogPow");
    return psb::reg_var_fn(dec(parts[0]), dec(parts[1]), dec(parts[2]), dec(parts[3]));
}

std::vector<std::pair<uint64_t, uint64_t>> default_windows(uint64_t xmax) {
    if (xmax < 16) throw psb::domain_error("xmax too small for verification windows");
    int e = 0;
    while ((1ULL << (e + 1)) <= xmax) ++e;
    if (e < 3) throw psb::domain_error("xmax too small for verification windows");
    std::vector<std::pair<uint64_t, uint64_t>> w;
    for (int i = -2; i <= 0; ++i)
        w.emplace_back(1ULL << (e + i), 1ULL << (e + i + 1));
    return w;
}

json plan_json(const subbase_opts& o, const std::vector<std::pair<uint64_t, uint64_t>>& windows) {
    json p;
    p["c"] = o.spec.c;
    p["k"] = o.spec.k;
    p["primes"] = o.spec.primes;
    p["F"] = o.F;
    p["h"] = o.h;
    p["lambda"] = o.lambda;
    p["xmax"] = o.xmax;
    p["seed"] = o.seed;
    json ws = json::array();
    for (const auto& [lo, hi] : windows) ws.push_back({lo, hi});
    p["windows"] = ws;
    return p;
}

void emit_json(const std::string& out, const json& j) {
    const std::string text = j.dump(2) + "\n";
    if (out.empty())
        std::cout << text;
    else
        write_text(out, text);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale experiments on thin additive subbases of floor-power sequences"};
    app.set_version_flag("--version", psb::version);
    int threads = 1;
    app.add_option("--threads", threads,
                   "worker pool size; cells are scheduled deterministically (accepted for "
                   "config compatibility, execution is sequential)");
    app.require_subcommand(1);

    params_opts po;
    gen_opts go;
    spec_opts counto;
    uint64_t count_xmax = 0;
    repcount_opts ro;
    hua_opts ho;
    singular_opts so;
    quadrature_opts qo;
    major_opts mo;
    minor_opts no;
    transfer_opts to;
    subbase_opts bo;
    accept_opts ao;

    auto add_spec = [](CLI::App* sub, spec_opts& s) {
        sub->add_option("--c", s.c, "exponent c as an exact decimal (1 or non-integral > 1)");
        sub->add_option("--k", s.k, "power k >= 1");
        sub->add_flag("--primes", s.primes, "restrict the ground sequence to primes");
    };

    // Every App claims -h for help on construction; the tuple length owns
    // --h here, so each subcommand keeps only the long help flag.
    auto mksub = [](CLI::App* parent, const std::string& name, const std::string& desc) {
        CLI::App* sub = parent->add_subcommand(name, desc);
        sub->set_help_flag("--help", "print help and exit");
        return sub;
    };
    app.set_help_flag("--help", "print help and exit");

    CLI::App* params = mksub(&app, "params", "threshold and table constants");
    CLI::App* params_dump = mksub(params, "dump", "print the constants as JSON");
    add_spec(params_dump, po.spec);
    params->require_subcommand(1);

    CLI::App* gen = mksub(&app, "gen", "list ground-set elements, one per line");
    add_spec(gen, go.spec);
    gen->add_option("--xmax", go.xmax, "upper bound")->required();
    gen->add_option("--out", go.out, "output file (stdout otherwise)");

    CLI::App* count = mksub(&app, "count", "count ground-set elements up to xmax");
    add_spec(count, counto);
    count->add_option("--xmax", count_xmax, "upper bound")->required();

    CLI::App* repcount =
        mksub(&app, "repcount", "representation counts or weighted solution sums");
    add_spec(repcount, ro.spec);
    repcount->add_option("--h", ro.h, "tuple length");
    repcount->add_option("--N", ro.N, "vector length cap")->required();
    repcount->add_option("--omega", ro.omega, "weight exponent; omitted: exact integer counts");
    repcount->add_flag("--log-weight", ro.log_weight, "multiply weights by log n");
    repcount->add_option("--out", ro.out, "output CSV")->required();

    CLI::App* hua = mksub(&app, "hua", "second moment of the representation function");
    add_spec(hua, ho.spec);
    hua->add_option("--h", ho.h, "tuple length");
    hua->add_option("--xgrid", ho.xgrid, "comma list of x values")->required();
    hua->add_option("--out", ho.out, "also write the CSV here");

    CLI::App* singular = mksub(&app, "singular", "truncated singular series values");
    singular->add_option("--k", so.k, "power k");
    singular->add_option("--h", so.h, "tuple length");
    singular->add_option("--Q", so.Q, "truncation level");
    singular->add_flag("--prime", so.prime, "prime-restricted variant");
    singular->add_option("--n", so.n, "n values: int, a..b, or comma list")->required();
    singular->add_option("--out", so.out, "output CSV")->required();

    CLI::App* circle = mksub(&app, "circle", "exponential sum experiments");
    circle->require_subcommand(1);

    CLI::App* quad = mksub(circle, 
        "verify-quadrature", "grid quadrature against the direct weighted solution sum");
    add_spec(quad, qo.spec);
    quad->add_option("--h", qo.h, "tuple length");
    quad->add_option("--omega", qo.omega, "weight exponent");
    quad->add_flag("--log-weight", qo.log_weight, "multiply weights by log n");
    quad->add_option("--ngrid", qo.ngrid, "comma list of N values")->required();
    quad->add_option("--M", qo.M, "grid size (default: minimal alias-free h*N+1)");
    quad->add_option("--out", qo.out, "output CSV (stdout otherwise)");

    CLI::App* major = mksub(circle, "major", "near-zero approximation error sweep");
    major->add_option("--c", mo.c, "exponent c (exact decimal)");
    major->add_option("--omega", mo.omega, "weight exponent");
    major->add_option("--nu", mo.nu, "arc width exponent");
    major->add_option("--ngrid", mo.ngrid, "comma list of N values")->required();
    major->add_option("--out", mo.out, "output CSV (stdout otherwise)");

    CLI::App* minor = mksub(circle, "minor", "sharp-sum sup over the complement arcs");
    minor->add_option("--c", no.c, "exponent c (exact decimal)");
    minor->add_option("--omega", no.omega, "weight exponent");
    minor->add_option("--nu", no.nu, "arc width exponent");
    minor->add_option("--grid-factor", no.grid_factor, "grid size multiplier (>= 4)");
    minor->add_option("--top-divisor", no.top_divisor, "keep coefficients with n >= N/divisor");
    minor->add_option("--ngrid", no.ngrid, "comma list of N values")->required();
    minor->add_option("--out", no.out, "output CSV (stdout otherwise)");

    CLI::App* transfer =
        mksub(circle, "transfer", "restricted-vs-weighted residual sup sweep");
    transfer->add_option("--k", to.k, "power k");
    transfer->add_option("--c", to.c, "exponent c (exact decimal)");
    transfer->add_option("--xgrid", to.xgrid, "comma list of x values")->required();
    transfer->add_flag("--log-weight", to.log_weight, "prime-restricted log-weighted variant");
    transfer->add_option("--grid-mult", to.grid_mult, "grid size as multiple of x (>= 4)");
    transfer->add_option("--out", to.out, "output CSV (stdout otherwise)");

    CLI::App* subbase = mksub(&app, "subbase", "randomized subbasis construction");
    subbase->require_subcommand(1);
    CLI::App* sb_cal = mksub(subbase, "calibrate", "bisect lambda to the target level");
    CLI::App* sb_sample = mksub(subbase, "sample", "draw one subbasis");
    CLI::App* sb_verify = mksub(subbase, "verify", "draw and check window ratios");
    for (CLI::App* sub : {sb_cal, sb_sample, sb_verify}) {
        add_spec(sub, bo.spec);
        sub->add_option("--F", bo.F, "target growth C,kappa,logPow,loglogPow");
        sub->add_option("--h", bo.h, "tuple length");
        sub->add_option("--xmax", bo.xmax, "ground set cap")->required();
        sub->add_option("--seed", bo.seed, "sampling seed");
        sub->add_option("--lambda", bo.lambda, "inclusion probability scale");
        sub->add_option("--windows", bo.windows, "verification windows lo:hi,lo:hi,...");
        sub->add_option("--trials", bo.trials, "calibration bisection passes");
        sub->add_option("--out", bo.out, "output JSON (stdout otherwise)");
    }

    CLI::App* accept = mksub(&app, "accept", "run the acceptance criteria suite");
    accept->add_option("--profile", ao.profile, "quick or full")
        ->check(CLI::IsMember({"quick", "full"}));
    accept->add_option("--out", ao.out, "directory for report.csv");
    accept->add_option("--inject-noise", ao.inject_noise,
                       "emulate a guard-disabled build by perturbing one indicator coefficient");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return psb::exit_usage;
    }

    // Reconstruct the run configuration from whatever chain of subcommands
    // actually parsed; flag values are kept verbatim.
    psb::experiment_config cfg;
    cfg.parallelism = threads;
    const CLI::App* cur = &app;
    while (true) {
        const auto subs = cur->get_subcommands();
        if (subs.empty()) break;
        cur = subs[0];
        cfg.command += (cfg.command.empty() ? "" : " ") + cur->get_name();
        for (const CLI::Option* o : cur->get_options()) {
            // The destination path is not part of the experiment: identical
            // configurations written to different files must stay
            // byte-identical, header included.
            if (o->count() == 0 || o->get_name() == "--help" || o->get_name() == "--out") continue;
            const auto& res = o->results();
            std::string v;
            if (res.empty()) {
                v = "true";
            } else {
                for (size_t i = 0; i < res.size(); ++i) v += (i ? "," : "") + res[i];
            }
            cfg.flags[o->get_name()] = v;
        }
    }
    if (cfg.flags.count("--seed")) cfg.seed_list = {to_u64(cfg.flags["--seed"])};

    const auto t0 = std::chrono::steady_clock::now();
    int status = psb::exit_ok;
    try {
        if (params_dump->parsed()) {
            const psb::rat c = psb::parse_decimal(po.spec.c);
            const bool thin = !c.is_integer() && c.value() > 1.0;
            json j;
            j["k"] = po.spec.k;
            j["c"] = po.spec.c;
            j["H0k"] = psb::h0_integer(po.spec.k);
            j["H0c"] = thin ? json(psb::h0_real(c)) : json(nullptr);
            j["K"] = psb::cap_K(po.spec.k);
            json P = nullptr, P0 = nullptr;
            if (thin && po.spec.k >= 2) {
                const auto p = psb::psw_threshold(po.spec.k, c);
                if (p) P = *p;
            }
            if (thin) {
                const auto p0 = psb::pswg_threshold(po.spec.k, c);
                if (p0) P0 = *p0;
            }
            j["P"] = P;
            j["P0star"] = P0;
            std::cout << j.dump() << "\n";
        } else if (gen->parsed()) {
            const psb::ground_set g = psb::generate(go.spec.make(), go.xmax);
            std::string text;
            for (uint64_t n : g.elements) text += std::to_string(n) + "\n";
            if (go.out.empty())
                std::cout << text;
            else
                write_text(go.out, text);
        } else if (count->parsed()) {
            std::cout << psb::count_members(counto.make(), count_xmax) << "\n";
        } else if (repcount->parsed()) {
            const psb::sequence_spec spec = ro.spec.make();
            std::vector<std::string> rows;
            std::string header;
            if (ro.omega.empty()) {
                header = "n,r";
                std::vector<double> values(ro.N + 1, 0.0);
                const psb::ground_set g = psb::generate(spec, ro.N);
                if (!g.elements.empty())
                    values = psb::rep_function(g.elements, ro.h, ro.N).values;
                for (uint64_t n = 0; n <= ro.N; ++n)
                    rows.push_back(std::to_string(n) + "," +
                                   std::to_string((long long)std::llround(values[n])));
            } else {
                header = "n,value";
                const std::vector<double> values =
                    psb::weighted_rep_vector(spec, ro.h, dec(ro.omega), ro.N, ro.log_weight);
                for (uint64_t n = 0; n <= ro.N; ++n)
                    rows.push_back(std::to_string(n) + "," + g17(values[n]));
            }
            write_csv(ro.out, cfg, header, rows);
        } else if (hua->parsed()) {
            const psb::sequence_spec spec = ho.spec.make();
            const double expo =
                2.0 * ho.h / (spec.c_value() * spec.k) - 1.0;
            std::vector<std::string> rows;
            for (uint64_t x : parse_u64_list(ho.xgrid)) {
                const double m = psb::hua_moment(spec, ho.h, x);
                const double scale = std::pow((double)x, expo);
                rows.push_back(std::to_string(x) + "," + g17(m) + "," + g17(m / scale));
            }
            emit_csv(std::cout, cfg, "x,moment,ratio", rows);
            if (!ho.out.empty()) write_csv(ho.out, cfg, "x,moment,ratio", rows);
        } else if (singular->parsed()) {
            const psb::singular_series_params p(so.k, so.h, so.Q, so.prime);
            std::vector<std::string> rows;
            for (long long n : parse_n_tokens(so.n)) {
                const double v = psb::singular_series(p, n);
                const bool adm = psb::congruence_admissible(so.k, so.h, n);
                rows.push_back(std::to_string(n) + "," + g17(v) + "," + (adm ? "1" : "0"));
            }
            write_csv(so.out, cfg, "n,value,admissible", rows);
        } else if (quad->parsed()) {
            const psb::sequence_spec spec = qo.spec.make();
            const double omega = dec(qo.omega);
            std::vector<std::string> rows;
            for (uint64_t N : parse_u64_list(qo.ngrid)) {
                const double direct =
                    psb::weighted_rep_sum(spec, qo.h, omega, N, qo.log_weight);
                const psb::weighted_series series =
                    psb::weighted_indicator(spec, N, omega, qo.log_weight);
                const size_t M = qo.M ? qo.M : (size_t)qo.h * N + 1;
                const double q = psb::quadrature_rep_sum(series, qo.h, N, M);
                const double measured = std::fabs(q - direct);
                const double scale = std::max(1.0, std::fabs(direct));
                rows.push_back(std::to_string(N) + "," + g17(measured) + "," + g17(scale) +
                               "," + g17(measured / scale));
            }
            if (qo.out.empty())
                emit_csv(std::cout, cfg, "N,measured,referenceScale,ratio", rows);
            else
                write_csv(qo.out, cfg, "N,measured,referenceScale,ratio", rows);
        } else if (major->parsed()) {
            const psb::sequence_spec spec(psb::parse_decimal(mo.c), 1, false);
            const double omega = dec(mo.omega), nu = dec(mo.nu);
            std::vector<std::string> rows;
            for (uint64_t N : parse_u64_list(mo.ngrid)) {
                const psb::major_arc_report r = psb::major_arc_error(spec, omega, N, nu);
                rows.push_back(std::to_string(N) + "," + g17(r.sup_error) + "," +
                               g17(r.bound) + "," + g17(r.ratio()));
            }
            if (mo.out.empty())
                emit_csv(std::cout, cfg, "N,supError,bound,ratio", rows);
            else
                write_csv(mo.out, cfg, "N,supError,bound,ratio", rows);
        } else if (minor->parsed()) {
            const psb::sequence_spec spec(psb::parse_decimal(no.c), 1, false);
            const double omega = dec(no.omega), nu = dec(no.nu);
            std::vector<std::string> rows;
            for (uint64_t N : parse_u64_list(no.ngrid)) {
                const double sup =
                    psb::minor_arc_sup(spec, omega, N, nu, no.grid_factor, no.top_divisor);
                const double scale = std::pow((double)N, omega);
                rows.push_back(std::to_string(N) + "," + g17(sup) + "," + g17(scale) + "," +
                               g17(sup / scale));
            }
            if (no.out.empty())
                emit_csv(std::cout, cfg, "N,sup,scale,normalized", rows);
            else
                write_csv(no.out, cfg, "N,sup,scale,normalized", rows);
        } else if (transfer->parsed()) {
            const psb::rat c = psb::parse_decimal(to.c);
            std::vector<std::string> rows;
            for (uint64_t x : parse_u64_list(to.xgrid)) {
                const psb::transfer_report r =
                    psb::transfer_residual(to.k, c, x, to.grid_mult * x, to.log_weight);
                rows.push_back(std::to_string(x) + "," + g17(r.sup_residual) + "," +
                               g17(r.reference_scale) + "," +
                               g17(r.sup_residual / r.reference_scale));
            }
            if (to.out.empty())
                emit_csv(std::cout, cfg, "x,supResidual,referenceScale,ratio", rows);
            else
                write_csv(to.out, cfg, "x,supResidual,referenceScale,ratio", rows);
        } else if (sb_cal->parsed() || sb_sample->parsed() || sb_verify->parsed()) {
            psb::sample_plan plan;
            plan.spec = bo.spec.make();
            plan.F = parse_F(bo.F);
            plan.h = bo.h;
            plan.x_max = bo.xmax;
            plan.seed = bo.seed;
            plan.lambda = dec(bo.lambda);
            const auto windows =
                bo.windows.empty() ? default_windows(bo.xmax) : parse_windows(bo.windows);
            json j;
            j["plan"] = plan_json(bo, windows);
            if (sb_cal->parsed()) {
                j["lambda"] = psb::calibrate_lambda(plan, windows, bo.trials);
            } else {
                const psb::sample_result res = psb::sample_subbase(plan);
                j["size"] = res.A.size();
                j["expectedSize"] = res.probs.expected_size;
                j["varianceBound"] = res.probs.variance_bound;
                j["maxP"] = res.probs.max_p;
                j["candidates"] = res.probs.candidates;
                if (sb_sample->parsed()) {
                    j["elements"] = res.A;
                } else {
                    const bool has_series = plan.spec.k >= 2 || plan.spec.primes;
                    psb::singular_series_params sp;
                    if (has_series)
                        sp = psb::singular_series_params(plan.spec.k, plan.h, 100,
                                                         plan.spec.primes);
                    const psb::reg_var_fn F = plan.F;
                    const int k = plan.spec.k, h = plan.h;
                    auto target = [&](uint64_t n) -> double {
                        double t = psb::regvar_eval(F, (double)n);
                        if (has_series) {
                            if (!psb::congruence_admissible(k, h, (long long)n)) return 0.0;
                            t *= psb::singular_series(sp, (long long)n);
                        }
                        return t;
                    };
                    const psb::verify_report vr =
                        psb::verify_subbase(res.A, plan.h, target, windows);
                    json ws = json::array();
                    for (const psb::window_stats& w : vr.per_window)
                        ws.push_back({{"lo", w.lo},
                                      {"hi", w.hi},
                                      {"meanRatio", w.mean_ratio},
                                      {"minRatio", w.min_ratio},
                                      {"maxRatio", w.max_ratio}});
                    j["windows"] = ws;
                    j["globalPass"] = vr.global_pass;
                }
            }
            emit_json(bo.out, j);
        } else if (accept->parsed()) {
            psb::acceptance_options opt;
            opt.full = ao.profile == "full";
            opt.fault_noise = dec(ao.inject_noise);
            opt.progress = &std::cout;
            const psb::acceptance_report rep = psb::run_acceptance(opt);
            int passed = 0;
            for (const psb::criterion_row& r : rep.rows) passed += r.pass ? 1 : 0;
            std::cout << "acceptance profile=" << rep.profile << " passed=" << passed << "/"
                      << rep.rows.size() << "\n";
            if (!ao.out.empty()) {
                std::filesystem::create_directories(ao.out);
                std::ofstream f(std::filesystem::path(ao.out) / "report.csv",
                                std::ios::binary);
                if (!f) throw psb::resource_error("cannot open report.csv in '" + ao.out + "'");
                f << "# " << psb::config_to_json(cfg) << "\n";
                psb::write_report_csv(rep, f);
            }
        }
    } catch (const psb::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        status = psb::exit_domain;
    } catch (const psb::resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        status = psb::exit_resource;
    } catch (const psb::internal_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        status = psb::exit_internal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        status = psb::exit_internal;
    }

    if (status == psb::exit_ok) {
        json hdr;
        hdr["version"] = psb::version;
        hdr["command"] = cfg.command;
        char hx[32];
        std::snprintf(hx, sizeof hx, "%016llx", (unsigned long long)psb::config_hash(cfg));
        hdr["configHash"] = hx;
        hdr["wallS"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cerr << hdr.dump() << "\n";
    }
    return status;
}
