#pragma once

// Reproducible experiments. Each takes a validated config and returns a
// report; extra artifacts (direction lists, exported grids) are returned as
// named byte strings so that callers decide where and whether to write them.

#include <string>
#include <utility>
#include <vector>

#include "lacuna/config.hpp"
#include "lacuna/operators.hpp"
#include "lacuna/report.hpp"

namespace lacuna {

struct ExperimentOutput {
    Report report;
    std::vector<std::pair<std::string, std::string>> files;  // file name -> contents
};

/// Dispatches on cfg.experiment.
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

ExperimentOutput dissect(const ExperimentConfig& cfg);
ExperimentOutput gen_directions(const ExperimentConfig& cfg);
ExperimentOutput verify_covering(const ExperimentConfig& cfg);
ExperimentOutput verify_inclusion_exclusion(const ExperimentConfig& cfg);
ExperimentOutput apply_operator(const ExperimentConfig& cfg);
ExperimentOutput norm_growth_sweep(const ExperimentConfig& cfg);
ExperimentOutput kernel_decay_report(const ExperimentConfig& cfg);
ExperimentOutput cww_comparison(const ExperimentConfig& cfg);
ExperimentOutput almost_orthogonality_check(const ExperimentConfig& cfg);
ExperimentOutput maximal_average_boundedness(const ExperimentConfig& cfg);
ExperimentOutput a2_experiment(const ExperimentConfig& cfg);

/// Pointwise comparison of |T_v^out N_v^j P_t^j f| with M_str(P_t^j f);
/// run by kernel-decay when params.pointwise is set.
void pointwise_domination(const ExperimentConfig& cfg, Report& rep);

// ---------------------------------------------------------------------------
// Pieces shared with the tests

struct LinearFit {
    double a = 0.0, c = 0.0, rss = 0.0;
};
/// Least squares y ~ a + c g(x); g == nullptr fits a constant.
LinearFit fit_model(const std::vector<double>& x, const std::vector<double>& y, double (*g)(double));
double sqrt_log(double N);
double plain_log(double N);

/// 0-based axis: `axis` (1-based) when positive, else the axis of the smallest coordinate of v.
int choose_axis(const Direction& v, int axis);

struct DecayConstants {
    double window = 0.0;  // over |x_k| <= 2^(t_ref - t) / 4, the same scaled box for every t >= t_ref
    double sup = 0.0;     // over the whole torus
};
/// max |phi(x)| prod_k (1 + s_k |x_k|)^2 / prod_k s_k with s_k = 2^(t - ell_kj),
/// x_k the signed periodic coordinate in [-1/2, 1/2).
DecayConstants decay_constants(const GridFunction& phi, const Direction& v, int j, int t, int t_ref);

}  // namespace lacuna
