#include "wpcn/experiments.hpp"

#include "wpcn/rng.hpp"
#include "wpcn/throughput.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace wpcn {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kNumSchemes = 6;

std::size_t scheme_index(Scheme s) { return static_cast<std::size_t>(s); }

struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

// Mean and standard error over the non-NaN entries, accumulated in slot
// order so the result is independent of how trials were scheduled.
Stat make_stat(const std::vector<double>& values) {
    Stat st;
    KahanSum sum;
    for (double v : values) {
        if (std::isnan(v)) continue;
        sum.add(v);
        ++st.count;
    }
    if (st.count == 0) return st;
    st.mean = sum.s / st.count;
    if (st.count > 1) {
        KahanSum sq;
        for (double v : values) {
            if (std::isnan(v)) continue;
            const double d = v - st.mean;
            sq.add(d * d);
        }
        st.stderr_mean = std::sqrt(sq.s / (st.count - 1)) / std::sqrt(double(st.count));
    }
    return st;
}

struct TrialResult {
    std::array<double, kNumSchemes> tau{kNan, kNan, kNan, kNan, kNan, kNan};
    double te_joint = kNan, te_all_d2d = kNan, te_all_cell = kNan;
    double d2d_fraction = kNan;
    double up_joint = kNan, down_joint = kNan;
    double up_all_cell = kNan, down_all_cell = kNan;
    double approx_loss = kNan;
    bool widened = false;
};

bool has_scheme(const std::vector<Scheme>& list, Scheme s) {
    return std::find(list.begin(), list.end(), s) != list.end();
}

TrialResult eval_trial(const CellSpec& cell, const CampaignConfig& cfg,
                       std::uint64_t dep_seed, std::uint64_t fad_seed) {
    SystemParams P = cfg.params;
    P.n_exp = cell.n_exp;
    const Deployment dep = deploy(cell.n_nodes, cell.field_size, dep_seed);
    const ChannelRealization ch = draw_channels(dep, P, fad_seed, cfg.fading_model);
    const std::vector<PairLink> links = make_links(dep, ch, P);

    TrialResult r;
    std::optional<OptimizationResult> joint;
    std::optional<TaSearchResult> all_d2d;

    for (Scheme s : cfg.schemes) {
        switch (s) {
            case Scheme::joint_opt: {
                joint = joint_optimize(links, P);
                r.tau[scheme_index(s)] = joint->tau_s;
                r.te_joint = joint->te_star;
                r.widened = joint->bounds_widened;
                double frac = 0.0;
                KahanSum up, down;
                int ncell = 0;
                for (std::size_t i = 0; i < links.size(); ++i) {
                    frac += joint->modes[i];
                    if (joint->modes[i] == 0) {
                        const TimeAllocation ta = joint->allocation(i);
                        up.add(1.0 - ta.t_e - ta.t_d);
                        down.add(ta.t_d);
                        ++ncell;
                    }
                }
                r.d2d_fraction = frac / double(links.size());
                if (ncell > 0) {
                    r.up_joint = up.s / ncell;
                    r.down_joint = down.s / ncell;
                }
                break;
            }
            case Scheme::all_d2d_opt_ta: {
                all_d2d = optimize_all_d2d(links, P);
                r.tau[scheme_index(s)] = all_d2d->value;
                r.te_all_d2d = all_d2d->te;
                break;
            }
            case Scheme::all_cell_opt_ta: {
                const TaSearchResult res = optimize_all_cellular(links, P);
                r.tau[scheme_index(s)] = res.value;
                r.te_all_cell = res.te;
                KahanSum up, down;
                for (const auto& link : links) {
                    const double td = optimal_td(link, P, res.te);
                    up.add(1.0 - res.te - td);
                    down.add(td);
                }
                r.up_all_cell = up.s / double(links.size());
                r.down_all_cell = down.s / double(links.size());
                break;
            }
            case Scheme::all_d2d_fixed_ta:
                r.tau[scheme_index(s)] = all_d2d_objective(links, P, 0.5);
                break;
            case Scheme::all_cell_fixed_ta:
            case Scheme::all_cell_uniform_ta: {
                double sum = 0.0;
                for (const auto& link : links)
                    sum += cellular_throughput(link, P, 1.0 / 3.0, 1.0 / 3.0);
                r.tau[scheme_index(s)] = sum;
                break;
            }
        }
    }

    if (all_d2d) {  // mean-gain approximation quality, relative to the search optimum
        const ApproxContext ap = approx_te_d2d(links, P);
        const double at_hat = all_d2d_objective(links, P, ap.te_hat);
        r.approx_loss = (all_d2d->value - at_hat) / all_d2d->value;
    }

    if (joint) {  // the joint optimum must dominate every scheme on this very realization
        for (Scheme s : cfg.schemes) {
            const double other = r.tau[scheme_index(s)];
            if (std::isnan(other)) continue;
            if (joint->tau_s + 1e-9 * std::fmax(1.0, other) < other)
                throw numerical_error("joint optimum fell below scheme " +
                                      std::string(scheme_name(s)));
        }
    }
    return r;
}

struct MetricColumns {
    std::array<std::vector<double>, kNumSchemes> tau;
    std::vector<double> te_joint, te_all_d2d, te_all_cell;
    std::vector<double> d2d_fraction;
    std::vector<double> up_joint, down_joint, up_all_cell, down_all_cell;
    std::vector<double> approx_loss;
    int widened = 0;

    explicit MetricColumns(std::size_t n) {
        for (auto& v : tau) v.assign(n, kNan);
        te_joint.assign(n, kNan);
        te_all_d2d.assign(n, kNan);
        te_all_cell.assign(n, kNan);
        d2d_fraction.assign(n, kNan);
        up_joint.assign(n, kNan);
        down_joint.assign(n, kNan);
        up_all_cell.assign(n, kNan);
        down_all_cell.assign(n, kNan);
        approx_loss.assign(n, kNan);
    }
    void put(std::size_t i, const TrialResult& r) {
        for (std::size_t s = 0; s < kNumSchemes; ++s) tau[s][i] = r.tau[s];
        te_joint[i] = r.te_joint;
        te_all_d2d[i] = r.te_all_d2d;
        te_all_cell[i] = r.te_all_cell;
        d2d_fraction[i] = r.d2d_fraction;
        up_joint[i] = r.up_joint;
        down_joint[i] = r.down_joint;
        up_all_cell[i] = r.up_all_cell;
        down_all_cell[i] = r.down_all_cell;
        approx_loss[i] = r.approx_loss;
    }
};

CellReport reduce_cell(const CellSpec& cell, const CampaignConfig& cfg, const MetricColumns& m) {
    CellReport rep;
    rep.cell = cell;
    rep.trials = cfg.trials();
    for (Scheme s : cfg.schemes) rep.tau_s[s] = make_stat(m.tau[scheme_index(s)]);
    rep.d2d_fraction = make_stat(m.d2d_fraction);
    rep.te_star_joint = make_stat(m.te_joint);
    rep.te_star_all_d2d = make_stat(m.te_all_d2d);
    rep.te_star_all_cell = make_stat(m.te_all_cell);
    rep.uplink_it_joint = make_stat(m.up_joint);
    rep.downlink_it_joint = make_stat(m.down_joint);
    rep.uplink_it_all_cell = make_stat(m.up_all_cell);
    rep.downlink_it_all_cell = make_stat(m.down_all_cell);
    rep.approx_loss = make_stat(m.approx_loss);
    rep.widened_count = m.widened;
    const bool have_joint = has_scheme(cfg.schemes, Scheme::joint_opt);
    const bool have_uniform = has_scheme(cfg.schemes, Scheme::all_cell_uniform_ta);
    if (have_joint && have_uniform) {
        const double base = rep.tau_s.at(Scheme::all_cell_uniform_ta).mean;
        const double joint = rep.tau_s.at(Scheme::joint_opt).mean;
        if (base > 0) rep.gain_over_baseline_pct = (joint / base - 1.0) * 100.0;
    }
    return rep;
}

}  // namespace

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::joint_opt: return "joint_opt";
        case Scheme::all_d2d_opt_ta: return "all_d2d_opt_ta";
        case Scheme::all_cell_opt_ta: return "all_cell_opt_ta";
        case Scheme::all_d2d_fixed_ta: return "all_d2d_fixed_ta";
        case Scheme::all_cell_fixed_ta: return "all_cell_fixed_ta";
        case Scheme::all_cell_uniform_ta: return "all_cell_uniform_ta";
    }
    return "unknown";
}

Scheme scheme_from_name(const std::string& name) {
    for (Scheme s : all_schemes())
        if (name == scheme_name(s)) return s;
    throw std::invalid_argument("unknown scheme: " + name);
}

std::vector<Scheme> all_schemes() {
    return {Scheme::joint_opt,        Scheme::all_d2d_opt_ta,
            Scheme::all_cell_opt_ta,  Scheme::all_d2d_fixed_ta,
            Scheme::all_cell_fixed_ta, Scheme::all_cell_uniform_ta};
}

std::vector<CellSpec> CampaignConfig::resolved_cells() const {
    if (!cells.empty()) return cells;
    if (n_exponents.empty()) throw std::invalid_argument("campaign: no exponents configured");
    std::vector<CellSpec> out;
    for (std::size_t i = 0; i < n_exponents.size(); ++i) {
        const double n = n_exponents[i];
        double L;
        if (field_sizes.empty()) L = field_size_for_exponent(n);
        else if (field_sizes.size() == 1) L = field_sizes[0];
        else if (field_sizes.size() == n_exponents.size()) L = field_sizes[i];
        else throw std::invalid_argument("campaign: field_sizes must be empty, one value, or one per exponent");
        out.push_back({n_nodes, n, L});
    }
    return out;
}

TrialSeeds trial_seeds(const CampaignConfig& cfg, std::size_t cell_index, int trial_index) {
    const int dep_index = trial_index / cfg.fading_per_deployment;
    return {derive_seed(cfg.seed, 2 * cell_index, static_cast<std::uint64_t>(dep_index)),
            derive_seed(cfg.seed, 2 * cell_index + 1, static_cast<std::uint64_t>(trial_index))};
}

CampaignReport run_campaign(const CampaignConfig& cfg) {
    if (cfg.deployments < 1 || cfg.fading_per_deployment < 1)
        throw std::invalid_argument("campaign: deployments and fading_per_deployment must be >= 1");
    if (cfg.schemes.empty()) throw std::invalid_argument("campaign: no schemes configured");
    validate(cfg.params);

    CampaignReport report;
    report.config = cfg;
    const auto cells = cfg.resolved_cells();
    const int trials = cfg.trials();
    int nthreads = cfg.threads > 0 ? cfg.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::max(1, std::min(nthreads, trials));

    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const CellSpec& cell = cells[ci];
        std::vector<TrialResult> slots(trials);
        std::atomic<int> next{0};
        std::atomic<int> widened{0};
        std::mutex err_mutex;
        std::string first_error;
        int first_error_trial = -1;

        auto worker = [&]() {
            for (;;) {
                const int t = next.fetch_add(1);
                if (t >= trials) return;
                {
                    std::lock_guard<std::mutex> lk(err_mutex);
                    if (first_error_trial >= 0) return;
                }
                try {
                    const TrialSeeds seeds = trial_seeds(cfg, ci, t);
                    slots[t] = eval_trial(cell, cfg, seeds.deployment, seeds.fading);
                    if (slots[t].widened) widened.fetch_add(1);
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lk(err_mutex);
                    if (first_error_trial < 0 || t < first_error_trial) {
                        first_error_trial = t;
                        first_error = e.what();
                    }
                }
            }
        };
        if (nthreads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }
        if (first_error_trial >= 0)
            throw numerical_error("cell " + std::to_string(ci) + " trial " +
                                  std::to_string(first_error_trial) + ": " + first_error);

        MetricColumns columns(slots.size());
        for (std::size_t i = 0; i < slots.size(); ++i) columns.put(i, slots[i]);
        columns.widened = widened.load();
        report.cells.push_back(reduce_cell(cell, cfg, columns));
    }
    return report;
}

std::map<Scheme, ItSplit> uplink_downlink_split(const CampaignConfig& cfg) {
    CampaignConfig c = cfg;
    if (!has_scheme(c.schemes, Scheme::joint_opt)) c.schemes.push_back(Scheme::joint_opt);
    if (!has_scheme(c.schemes, Scheme::all_cell_opt_ta)) c.schemes.push_back(Scheme::all_cell_opt_ta);
    const CampaignReport rep = run_campaign(c);

    auto combine = [&](auto up_of, auto down_of) -> std::optional<ItSplit> {
        KahanSum up, down;
        long total = 0;
        for (const auto& cell : rep.cells) {
            const Stat u = up_of(cell), d = down_of(cell);
            if (u.count == 0) continue;
            up.add(u.mean * u.count);
            down.add(d.mean * d.count);
            total += u.count;
        }
        if (total == 0) return std::nullopt;
        return ItSplit{up.s / total, down.s / total};
    };
    const auto joint = combine([](const CellReport& c) { return c.uplink_it_joint; },
                               [](const CellReport& c) { return c.downlink_it_joint; });
    const auto cell = combine([](const CellReport& c) { return c.uplink_it_all_cell; },
                              [](const CellReport& c) { return c.downlink_it_all_cell; });
    if (!joint.has_value())
        throw numerical_error("uplink_downlink_split: no pair ever selected cellular mode");
    std::map<Scheme, ItSplit> out;
    out[Scheme::joint_opt] = *joint;
    out[Scheme::all_cell_opt_ta] = *cell;
    return out;
}

std::vector<std::pair<CellSpec, Stat>> d2d_selection_stats(const CampaignConfig& cfg) {
    CampaignConfig c = cfg;
    if (!has_scheme(c.schemes, Scheme::joint_opt)) c.schemes.push_back(Scheme::joint_opt);
    const CampaignReport rep = run_campaign(c);
    std::vector<std::pair<CellSpec, Stat>> out;
    for (const auto& cell : rep.cells) out.emplace_back(cell.cell, cell.d2d_fraction);
    return out;
}

nlohmann::json to_json(const CampaignConfig& cfg) {
    nlohmann::json schemes = nlohmann::json::array();
    for (Scheme s : cfg.schemes) schemes.push_back(scheme_name(s));
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : cfg.resolved_cells())
        cells.push_back({{"n_nodes", c.n_nodes}, {"n_exp", c.n_exp}, {"field_size", c.field_size}});
    return {
        {"n_nodes", cfg.n_nodes},
        {"n_exponents", cfg.n_exponents},
        {"field_sizes", cfg.field_sizes},
        {"deployments", cfg.deployments},
        {"fading_per_deployment", cfg.fading_per_deployment},
        {"seed", cfg.seed},
        {"schemes", schemes},
        {"fading_model", cfg.fading_model == FadingModel::deterministic_unity
                             ? "deterministic_unity"
                             : "unit_mean_exponential"},
        {"threads", cfg.threads},
        {"resolved_cells", cells},
        {"params",
         {{"p0_watts", cfg.params.p0},
          {"sigma2_watts", cfg.params.sigma2},
          {"theta", cfg.params.theta},
          {"eta", cfg.params.eta},
          {"rho", cfg.params.rho},
          {"phi", cfg.params.phi},
          {"path_loss_coeff", cfg.params.p_coeff},
          {"xi", cfg.params.xi},
          {"eps", cfg.params.eps}}},
    };
}

namespace {

nlohmann::json stat_json(const Stat& s) {
    return {{"mean", s.mean}, {"stderr", s.stderr_mean}, {"count", s.count}};
}

}  // namespace

nlohmann::json to_json(const CampaignReport& report) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : report.cells) {
        nlohmann::json tau;
        for (const auto& [s, st] : c.tau_s) tau[scheme_name(s)] = stat_json(st);
        nlohmann::json cell = {
            {"n_nodes", c.cell.n_nodes},
            {"n_exp", c.cell.n_exp},
            {"field_size", c.cell.field_size},
            {"trials", c.trials},
            {"tau_s", tau},
            {"d2d_fraction", stat_json(c.d2d_fraction)},
            {"te_star_joint", stat_json(c.te_star_joint)},
            {"te_star_all_d2d", stat_json(c.te_star_all_d2d)},
            {"te_star_all_cell", stat_json(c.te_star_all_cell)},
            {"uplink_it_joint", stat_json(c.uplink_it_joint)},
            {"downlink_it_joint", stat_json(c.downlink_it_joint)},
            {"uplink_it_all_cell", stat_json(c.uplink_it_all_cell)},
            {"downlink_it_all_cell", stat_json(c.downlink_it_all_cell)},
            {"approx_loss", stat_json(c.approx_loss)},
            {"widened_count", c.widened_count},
        };
        if (c.gain_over_baseline_pct.has_value())
            cell["gain_over_baseline_pct"] = *c.gain_over_baseline_pct;
        cells.push_back(cell);
    }
    return {{"config", to_json(report.config)}, {"cells", cells}};
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void csv_header(std::ostringstream& os, const CampaignConfig& cfg) {
    os << "# wpcn campaign report\n";
    os << "# config: " << to_json(cfg).dump() << "\n";
}

void csv_row(std::ostringstream& os, const char* scheme, const char* metric,
             const CellSpec& cell, int trials, double value, double stderr_mean) {
    os << scheme << ',' << metric << ',' << cell.n_nodes << ',' << fmt(cell.n_exp) << ','
       << fmt(cell.field_size) << ',' << trials << ',' << fmt(value) << ','
       << fmt(stderr_mean) << '\n';
}

}  // namespace

std::string report_to_csv(const CampaignReport& report) {
    std::ostringstream os;
    csv_header(os, report.config);
    os << "scheme,metric,n_nodes,n_exp,field_size,trials,value,stderr\n";
    for (const auto& c : report.cells) {
        for (Scheme s : report.config.schemes)
            csv_row(os, scheme_name(s), "tau_s", c.cell, c.trials,
                    c.tau_s.at(s).mean, c.tau_s.at(s).stderr_mean);
        if (c.te_star_joint.count > 0)
            csv_row(os, "joint_opt", "te_star", c.cell, c.trials, c.te_star_joint.mean,
                    c.te_star_joint.stderr_mean);
        if (c.te_star_all_d2d.count > 0)
            csv_row(os, "all_d2d_opt_ta", "te_star", c.cell, c.trials, c.te_star_all_d2d.mean,
                    c.te_star_all_d2d.stderr_mean);
        if (c.te_star_all_cell.count > 0)
            csv_row(os, "all_cell_opt_ta", "te_star", c.cell, c.trials, c.te_star_all_cell.mean,
                    c.te_star_all_cell.stderr_mean);
        if (c.d2d_fraction.count > 0)
            csv_row(os, "joint_opt", "d2d_fraction", c.cell, c.trials, c.d2d_fraction.mean,
                    c.d2d_fraction.stderr_mean);
        if (c.uplink_it_joint.count > 0) {
            csv_row(os, "joint_opt", "uplink_it", c.cell, c.trials, c.uplink_it_joint.mean,
                    c.uplink_it_joint.stderr_mean);
            csv_row(os, "joint_opt", "downlink_it", c.cell, c.trials, c.downlink_it_joint.mean,
                    c.downlink_it_joint.stderr_mean);
        }
        if (c.uplink_it_all_cell.count > 0) {
            csv_row(os, "all_cell_opt_ta", "uplink_it", c.cell, c.trials,
                    c.uplink_it_all_cell.mean, c.uplink_it_all_cell.stderr_mean);
            csv_row(os, "all_cell_opt_ta", "downlink_it", c.cell, c.trials,
                    c.downlink_it_all_cell.mean, c.downlink_it_all_cell.stderr_mean);
        }
        if (c.approx_loss.count > 0)
            csv_row(os, "all_d2d_opt_ta", "approx_loss", c.cell, c.trials, c.approx_loss.mean,
                    c.approx_loss.stderr_mean);
        if (c.gain_over_baseline_pct.has_value())
            csv_row(os, "joint_opt", "gain_over_baseline_pct", c.cell, c.trials,
                    *c.gain_over_baseline_pct, 0.0);
    }
    return os.str();
}

std::vector<std::string> figure_ids() {
    return {"fig3", "fig4", "fig5a", "fig5b", "fig6a", "fig7"};
}

std::string figure_csv(const std::string& figure_id, const CampaignConfig& base) {
    CampaignConfig cfg = base;
    cfg.cells.clear();
    std::ostringstream os;
    const std::vector<double> exps = {2.0, 3.0, 4.0, 5.0};
    // Field sizes follow the base config when given (one value, or one per
    // configured exponent); otherwise the tabulated defaults.
    const auto field_for = [&base](double n) {
        if (base.field_sizes.size() == 1) return base.field_sizes[0];
        for (std::size_t i = 0; i < base.n_exponents.size() && i < base.field_sizes.size(); ++i)
            if (base.n_exponents[i] == n) return base.field_sizes[i];
        return field_size_for_exponent(n);
    };

    if (figure_id == "fig3") {
        cfg.schemes = all_schemes();
        for (int n_nodes : {20, 40})
            for (double n : exps)
                cfg.cells.push_back({n_nodes, n, field_for(n)});
        const CampaignReport rep = run_campaign(cfg);
        csv_header(os, cfg);
        os << "n_nodes,n_exp,field_size,scheme,mean_tau_s,stderr\n";
        for (const auto& c : rep.cells)
            for (Scheme s : cfg.schemes)
                os << c.cell.n_nodes << ',' << fmt(c.cell.n_exp) << ',' << fmt(c.cell.field_size)
                   << ',' << scheme_name(s) << ',' << fmt(c.tau_s.at(s).mean) << ','
                   << fmt(c.tau_s.at(s).stderr_mean) << '\n';
        return os.str();
    }
    if (figure_id == "fig4") {
        cfg.schemes = {Scheme::joint_opt};
        for (double n : exps)
            for (double scale : {0.4, 0.6, 0.8, 1.0})
                cfg.cells.push_back({base.n_nodes, n, scale * field_for(n)});
        const CampaignReport rep = run_campaign(cfg);
        csv_header(os, cfg);
        os << "n_nodes,n_exp,field_size,d2d_fraction,stderr\n";
        for (const auto& c : rep.cells)
            os << c.cell.n_nodes << ',' << fmt(c.cell.n_exp) << ',' << fmt(c.cell.field_size)
               << ',' << fmt(c.d2d_fraction.mean) << ',' << fmt(c.d2d_fraction.stderr_mean) << '\n';
        return os.str();
    }
    if (figure_id == "fig5a") {
        cfg.schemes = {Scheme::joint_opt, Scheme::all_d2d_opt_ta, Scheme::all_cell_opt_ta};
        for (double n : exps) cfg.cells.push_back({base.n_nodes, n, field_for(n)});
        const CampaignReport rep = run_campaign(cfg);
        csv_header(os, cfg);
        os << "n_nodes,n_exp,field_size,scheme,mean_te_star,stderr\n";
        for (const auto& c : rep.cells) {
            const std::pair<const char*, const Stat*> rows[] = {
                {"joint_opt", &c.te_star_joint},
                {"all_d2d_opt_ta", &c.te_star_all_d2d},
                {"all_cell_opt_ta", &c.te_star_all_cell}};
            for (const auto& [name, st] : rows)
                os << c.cell.n_nodes << ',' << fmt(c.cell.n_exp) << ',' << fmt(c.cell.field_size)
                   << ',' << name << ',' << fmt(st->mean) << ',' << fmt(st->stderr_mean) << '\n';
        }
        return os.str();
    }
    if (figure_id == "fig5b") {
        cfg.schemes = {Scheme::all_d2d_opt_ta};
        const double n = base.n_exponents.empty() ? 2.0 : base.n_exponents.front();
        for (int n_nodes : {10, 20, 30, 40})
            cfg.cells.push_back({n_nodes, n, field_for(n)});
        const CampaignReport rep = run_campaign(cfg);
        csv_header(os, cfg);
        os << "n_nodes,n_exp,field_size,approx_loss_pct,stderr_pct\n";
        for (const auto& c : rep.cells)
            os << c.cell.n_nodes << ',' << fmt(c.cell.n_exp) << ',' << fmt(c.cell.field_size)
               << ',' << fmt(100.0 * c.approx_loss.mean) << ','
               << fmt(100.0 * c.approx_loss.stderr_mean) << '\n';
        return os.str();
    }
    if (figure_id == "fig6a") {
        cfg.schemes = {Scheme::joint_opt, Scheme::all_cell_opt_ta};
        const double n = base.n_exponents.empty() ? 2.0 : base.n_exponents.front();
        for (int n_nodes : {10, 20, 30, 40})
            cfg.cells.push_back({n_nodes, n, field_for(n)});
        const CampaignReport rep = run_campaign(cfg);
        csv_header(os, cfg);
        os << "n_nodes,n_exp,field_size,scheme,mean_uplink_it,stderr_uplink,mean_downlink_it,stderr_downlink\n";
        // nan marks cells where the scheme never produced a cellular pair
        const auto mean_of = [](const Stat& s) { return s.count > 0 ? s.mean : kNan; };
        const auto err_of = [](const Stat& s) { return s.count > 0 ? s.stderr_mean : kNan; };
        for (const auto& c : rep.cells) {
            os << c.cell.n_nodes << ',' << fmt(c.cell.n_exp) << ',' << fmt(c.cell.field_size)
               << ",joint_opt," << fmt(mean_of(c.uplink_it_joint)) << ','
               << fmt(err_of(c.uplink_it_joint)) << ',' << fmt(mean_of(c.downlink_it_joint))
               << ',' << fmt(err_of(c.downlink_it_joint)) << '\n';
            os << c.cell.n_nodes << ',' << fmt(c.cell.n_exp) << ',' << fmt(c.cell.field_size)
               << ",all_cell_opt_ta," << fmt(mean_of(c.uplink_it_all_cell)) << ','
               << fmt(err_of(c.uplink_it_all_cell)) << ',' << fmt(mean_of(c.downlink_it_all_cell))
               << ',' << fmt(err_of(c.downlink_it_all_cell)) << '\n';
        }
        return os.str();
    }
    if (figure_id == "fig7") {
        cfg.schemes = {Scheme::joint_opt, Scheme::all_cell_uniform_ta};
        for (double n : exps) cfg.cells.push_back({base.n_nodes, n, field_for(n)});
        const CampaignReport rep = run_campaign(cfg);
        csv_header(os, cfg);
        os << "n_nodes,n_exp,field_size,gain_pct\n";
        for (const auto& c : rep.cells)
            os << c.cell.n_nodes << ',' << fmt(c.cell.n_exp) << ',' << fmt(c.cell.field_size)
               << ',' << fmt(c.gain_over_baseline_pct.value_or(kNan)) << '\n';
        return os.str();
    }
    std::string valid;
    for (const auto& id : figure_ids()) valid += (valid.empty() ? "" : " ") + id;
    throw std::invalid_argument("unknown figure id '" + figure_id + "'; valid ids: " + valid);
}

CampaignConfig campaign_config_from_json(const nlohmann::json& j) {
    CampaignConfig cfg;
    static const char* known[] = {"n_nodes", "n_exponents", "field_sizes", "deployments",
                                  "fading_per_deployment", "seed", "schemes", "fading_model",
                                  "threads"};
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw std::invalid_argument("campaign config: unknown key '" + key + "'");
    }
    if (j.contains("n_nodes")) cfg.n_nodes = j.at("n_nodes").get<int>();
    if (j.contains("n_exponents")) cfg.n_exponents = j.at("n_exponents").get<std::vector<double>>();
    if (j.contains("field_sizes")) cfg.field_sizes = j.at("field_sizes").get<std::vector<double>>();
    if (j.contains("deployments")) cfg.deployments = j.at("deployments").get<int>();
    if (j.contains("fading_per_deployment"))
        cfg.fading_per_deployment = j.at("fading_per_deployment").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    if (j.contains("schemes")) {
        cfg.schemes.clear();
        for (const auto& s : j.at("schemes")) cfg.schemes.push_back(scheme_from_name(s.get<std::string>()));
    }
    if (j.contains("fading_model")) {
        const std::string m = j.at("fading_model").get<std::string>();
        if (m == "deterministic_unity") cfg.fading_model = FadingModel::deterministic_unity;
        else if (m == "unit_mean_exponential") cfg.fading_model = FadingModel::unit_mean_exponential;
        else throw std::invalid_argument("campaign config: unknown fading_model '" + m + "'");
    }
    if (cfg.n_nodes < 2 || cfg.n_nodes % 2 != 0)
        throw std::invalid_argument("campaign config: n_nodes must be even and >= 2");
    return cfg;
}

}  // namespace wpcn
