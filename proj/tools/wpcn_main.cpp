// Command-line front end: single-instance optimization, Monte-Carlo
// campaigns, and figure-data sweeps. Exit codes: 0 ok, 2 config error,
// 3 numerical failure.

#include "wpcn/experiments.hpp"
#include "wpcn/kernels.hpp"
#include "wpcn/optimizer.hpp"
#include "wpcn/params.hpp"
#include "wpcn/rng.hpp"
#include "wpcn/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using nlohmann::json;

json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json j;
    in >> j;
    return j;
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw std::invalid_argument(where + ": unknown key '" + key + "'");
    }
}

wpcn::SystemParams params_from_json(const json& j) {
    wpcn::SystemParams p;
    reject_unknown_keys(j,
                        {"p0_watts", "sigma2_dbm", "theta", "eta", "rho", "phi",
                         "path_loss_exponent", "path_loss_coeff", "xi", "eps"},
                        "params");
    if (j.contains("p0_watts")) p.p0 = j.at("p0_watts").get<double>();
    if (j.contains("sigma2_dbm")) p.sigma2 = wpcn::dbm_to_watts(j.at("sigma2_dbm").get<double>());
    if (j.contains("theta")) p.theta = j.at("theta").get<double>();
    if (j.contains("eta")) p.eta = j.at("eta").get<double>();
    if (j.contains("rho")) p.rho = j.at("rho").get<double>();
    if (j.contains("phi")) p.phi = j.at("phi").get<double>();
    if (j.contains("path_loss_exponent")) p.n_exp = j.at("path_loss_exponent").get<double>();
    if (j.contains("path_loss_coeff")) p.p_coeff = j.at("path_loss_coeff").get<double>();
    if (j.contains("xi")) p.xi = j.at("xi").get<double>();
    if (j.contains("eps")) p.eps = j.at("eps").get<double>();
    wpcn::validate(p);
    return p;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
    out << text;
}

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::string format = "json";
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> threads;
    bool verbose = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_format = true) {
    cmd->add_option("--config", o.config_path, "JSON config file");
    cmd->add_option("--out", o.out_path, "output file (stdout when omitted)");
    if (with_format)
        cmd->add_option("--format", o.format, "output format")
            ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--seed", o.seed, "override the config seed");
    cmd->add_option("--trials", o.trials,
                    "override trial count (runs that many deployments, one fading block each)");
    cmd->add_option("--threads", o.threads, "cap worker threads");
    cmd->add_flag("-v,--verbose", o.verbose, "progress notes on stderr");
}

wpcn::CampaignConfig build_campaign_config(const json& root, const CommonOpts& o) {
    wpcn::CampaignConfig cfg;
    if (root.contains("campaign")) cfg = wpcn::campaign_config_from_json(root.at("campaign"));
    if (root.contains("params")) cfg.params = params_from_json(root.at("params"));
    if (o.seed) cfg.seed = *o.seed;
    if (o.trials) {
        cfg.deployments = *o.trials;
        cfg.fading_per_deployment = 1;
    }
    if (o.threads) cfg.threads = *o.threads;
    return cfg;
}

int cmd_campaign(const CommonOpts& o) {
    const json root = load_config_file(o.config_path);
    reject_unknown_keys(root, {"params", "campaign", "optimize"}, "config");
    const wpcn::CampaignConfig cfg = build_campaign_config(root, o);
    if (o.verbose)
        std::cerr << "campaign: " << cfg.resolved_cells().size() << " cells x " << cfg.trials()
                  << " trials, kernels=" << wpcn::kernels::backend_name(wpcn::kernels::active_backend())
                  << "\n";
    const wpcn::CampaignReport report = wpcn::run_campaign(cfg);
    emit(o.format == "csv" ? wpcn::report_to_csv(report) : wpcn::to_json(report).dump(2) + "\n",
         o.out_path);
    return 0;
}

int cmd_figures(const std::string& figure_id, const CommonOpts& o) {
    const json root = load_config_file(o.config_path);
    reject_unknown_keys(root, {"params", "campaign", "optimize"}, "config");
    const wpcn::CampaignConfig cfg = build_campaign_config(root, o);
    if (o.verbose) std::cerr << "figures: " << figure_id << "\n";
    emit(wpcn::figure_csv(figure_id, cfg), o.out_path);
    return 0;
}

int cmd_optimize(const CommonOpts& o) {
    const json root = load_config_file(o.config_path);
    reject_unknown_keys(root, {"params", "campaign", "optimize"}, "config");
    wpcn::SystemParams params;
    if (root.contains("params")) params = params_from_json(root.at("params"));
    if (!root.contains("optimize"))
        throw std::invalid_argument("optimize: config must contain an 'optimize' block");
    const json& op = root.at("optimize");
    reject_unknown_keys(op, {"pairs", "n_nodes", "field_size", "seed", "fading_model"}, "optimize");

    std::vector<wpcn::PairLink> links;
    json resolved = json::object();
    std::uint64_t seed = op.value("seed", std::uint64_t{1});
    if (o.seed) seed = *o.seed;

    if (op.contains("pairs")) {
        for (const auto& pj : op.at("pairs")) {
            reject_unknown_keys(pj, {"h_t", "h_r", "g", "eta_t", "rho_t", "phi_r"},
                                "optimize.pairs");
            wpcn::PairLink l{};
            l.h_t = pj.at("h_t").get<double>();
            l.h_r = pj.at("h_r").get<double>();
            l.g = pj.at("g").get<double>();
            l.eta_t = pj.value("eta_t", params.eta);
            l.rho_t = pj.value("rho_t", params.rho);
            l.phi_r = pj.value("phi_r", params.phi);
            wpcn::validate(l);
            links.push_back(l);
        }
        resolved["pairs"] = op.at("pairs");
    } else if (op.contains("n_nodes")) {
        const int n_nodes = op.at("n_nodes").get<int>();
        const double field = op.contains("field_size")
                                 ? op.at("field_size").get<double>()
                                 : wpcn::field_size_for_exponent(params.n_exp);
        auto model = wpcn::FadingModel::unit_mean_exponential;
        if (op.value("fading_model", "") == std::string("deterministic_unity"))
            model = wpcn::FadingModel::deterministic_unity;
        const auto dep = wpcn::deploy(n_nodes, field, wpcn::derive_seed(seed, 0, 0));
        const auto ch = wpcn::draw_channels(dep, params, wpcn::derive_seed(seed, 1, 0), model);
        links = wpcn::make_links(dep, ch, params);
        resolved["deployment"] = wpcn::to_json(dep);
        resolved["channels"] = wpcn::to_json(ch);
    } else {
        throw std::invalid_argument(
            "optimize: specify either explicit 'pairs' or 'n_nodes' (+ optional field_size, seed)");
    }
    if (links.empty()) throw std::invalid_argument("optimize: no pairs configured");

    const wpcn::OptimizationResult result = wpcn::joint_optimize(links, params);

    if (o.format == "csv") {
        const json meta = {{"seed", seed},
                           {"params",
                            {{"p0_watts", params.p0},
                             {"sigma2_watts", params.sigma2},
                             {"theta", params.theta},
                             {"eta", params.eta},
                             {"rho", params.rho},
                             {"phi", params.phi},
                             {"path_loss_exponent", params.n_exp},
                             {"path_loss_coeff", params.p_coeff},
                             {"xi", params.xi},
                             {"eps", params.eps}}},
                           {"input", resolved}};
        std::ostringstream os;
        os << "# wpcn optimize result\n";
        os << "# config: " << meta.dump() << "\n";
        os << "# te_star: " << result.te_star << "\n";
        os << "# tau_s: " << result.tau_s << "\n";
        os << "pair,mode,td_star,tau\n";
        for (std::size_t i = 0; i < links.size(); ++i)
            os << i << ',' << (result.modes[i] ? "d2d" : "cellular") << ',' << result.td_star[i]
               << ',' << result.per_pair_tau[i] << '\n';
        emit(os.str(), o.out_path);
        return 0;
    }
    json out = {
        {"seed", seed},
        {"kernel_backend", wpcn::kernels::backend_name(wpcn::kernels::active_backend())},
        {"params",
         {{"p0_watts", params.p0},
          {"sigma2_watts", params.sigma2},
          {"theta", params.theta},
          {"eta", params.eta},
          {"rho", params.rho},
          {"phi", params.phi},
          {"path_loss_exponent", params.n_exp},
          {"path_loss_coeff", params.p_coeff},
          {"xi", params.xi},
          {"eps", params.eps}}},
        {"input", resolved},
        {"result", wpcn::to_json(result)},
    };
    emit(out.dump(2) + "\n", o.out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RF-powered D2D mode selection and time allocation"};
    app.require_subcommand(1);

    CommonOpts opt_o, camp_o, fig_o;
    std::string figure_id;

    CLI::App* opt = app.add_subcommand("optimize", "jointly optimal modes and times for one instance");
    add_common(opt, opt_o);
    CLI::App* camp = app.add_subcommand("campaign", "Monte-Carlo campaign over deployments and fading");
    add_common(camp, camp_o);
    CLI::App* fig = app.add_subcommand("figures", "emit one of the named benchmark sweeps as CSV");
    fig->add_option("figure_id", figure_id, "one of: fig3 fig4 fig5a fig5b fig6a fig7")->required();
    add_common(fig, fig_o, /*with_format=*/false);

    try {
        app.parse(argc, argv);
        if (opt->parsed()) return cmd_optimize(opt_o);
        if (camp->parsed()) return cmd_campaign(camp_o);
        if (fig->parsed()) return cmd_figures(figure_id, fig_o);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
