// Lower-level game solvers: the HV-HV Nash game, the manufacturer-HV
// Stackelberg game, the pure-AV and exclusive-lane optimizations, the
// numerical existence/uniqueness condition checks, and the
// brute-force grid oracle used to cross-check every continuous solver.
#pragma once

#include <stdexcept>
#include <string>

#include "liability/model.hpp"

namespace liability {

struct SolverConfig {
    double care_tolerance = 1e-6;  // absolute convergence tolerance on care levels
    int grid_resolution = 1000;    // points per axis for oracle and leader scans
    int max_iterations = 200;      // best-response iteration cap
    double fd_step = 1e-5;         // finite-difference step for derivative checks
};

std::vector<std::string> validate(const SolverConfig& config);

// Thrown when an iterative solver fails to converge; carries the last iterate.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double last_iterate, double residual)
        : std::runtime_error(what), last_iterate(last_iterate), residual(residual) {}
    double last_iterate;
    double residual;
};

struct BestResponse {
    double care = 0.0;
    double derivative_residual = 0.0;
    bool at_lower = false;
    bool at_upper = false;
};

// The HV's cost-minimizing care against a fixed AV care level in the AH
// scenario. Unique by the convexity of the objective; a boundary optimum is
// flagged, not an error. p does not enter the HV objective and is only
// validated.
BestResponse best_response_hv_ah(double c_a, double k, double p,
                                 const ModelParams& params, const SolverConfig& config);

// Same response for a driver with an overridden trade-off weight; used by the
// heterogeneous-driver Monte Carlo.
BestResponse best_response_hv_ah_weighted(double c_a, double k, double w_h,
                                          const ModelParams& params,
                                          const SolverConfig& config);

struct NashResult {
    double c_1 = 0.0;
    double c_2 = 0.0;
    int iterations = 0;
    double residual = 0.0;  // last best-response displacement
    bool damped = false;
};

// Symmetric Nash equilibrium of the HV-HV game by alternating best
// responses with step-halving damping if the iteration oscillates. Throws
// SolverError when max_iterations is exhausted.
NashResult nash_hh(const ModelParams& params, const SolverConfig& config);

struct StackelbergResult {
    double c_a = 0.0;
    double c_h_ah = 0.0;
    bool leader_at_lower = false;
    bool leader_at_upper = false;
    bool leader_tie = false;      // another scan point tied within tolerance
    bool follower_at_lower = false;
    bool follower_at_upper = false;
};

// Leader-follower equilibrium of the AH game: coarse leader scan over
// grid_resolution points, then first-order-condition refinement of
// C_A(c_a, best_response(c_a)). Requires p in (0,1).
StackelbergResult stackelberg_ah(double k, double p, const ModelParams& params,
                                 const SolverConfig& config);

struct ScalarOptimum {
    double care = 0.0;
    bool at_lower = false;
    bool at_upper = false;
};

// Monopoly optimum of the pure-AV market (p = 1).
ScalarOptimum pure_av_optimum(const ModelParams& params, const SolverConfig& config);

struct ExclusiveLanesResult {
    ScalarOptimum av;
    NashResult hh;  // HVs play the unchanged HH Nash game in their own lanes
};

// Equilibrium when AVs and HVs drive in separate lanes: the manufacturer
// faces only the reweighted AA loss, HVs only one another.
ExclusiveLanesResult exclusive_lanes_equilibrium(double p, const ModelParams& params,
                                                 const SolverConfig& config);

struct SSECondition {
    bool pass = false;
    double min_value = 0.0;  // minimal observed second derivative / eigenvalue
    int samples = 0;
    int skipped = 0;         // stencils dropped for touching a severity clamp
};

// Numerical verification of the four sufficient conditions for existence
// and uniqueness. Conditions 1-2 sample the full care box (stencils that
// straddle a severity-clamp kink are skipped; the costs are only piecewise
// C^2 there). Condition 3 is a single central second difference of the
// social cost in k at the queried ratio. Condition 4 samples the
// neighborhood [c*/2, 3c*/2]^2 of the HH equilibrium; the Rosen matrix is
// provably indefinite far off the diagonal for this share function, so the
// meaningful check is local.
struct SSEReport {
    SSECondition follower_convexity;       // d2 C_H^AH / d c_H^2 > 0
    SSECondition leader_convexity;         // d2 C_A(c_A, m_sl(c_A)) / d c_A^2 > 0
    SSECondition lawmaker_convexity;       // d2 SC / d k^2 > 0 at the queried k
    SSECondition hh_jacobian_definite;     // min eig of J + J^T > 0 near the equilibrium
    bool all_pass() const {
        return follower_convexity.pass && leader_convexity.pass &&
               lawmaker_convexity.pass && hh_jacobian_definite.pass;
    }
};

SSEReport check_sse_conditions(double k, double p, const ModelParams& params,
                               const SolverConfig& config);

enum class OracleGame { HH, AH, PureAV, Exclusive };

struct OracleResult {
    double c_1 = 0.0;  // HH: player 1, AH: AV, PureAV/Exclusive: AV
    double c_2 = 0.0;  // HH: player 2, AH: HV, otherwise unused (0)
};

// Brute-force reference: exhaustive enumeration over the discretized
// feasible set (resolution points per axis, ties broken toward smaller
// care) followed by a parabolic sub-cell refinement of each argmin. The
// refinement uses only enumeration samples; without it the discrete
// follower response injects first-order noise into the leader objective
// and the oracle fails its own refinement-consistency invariant.
OracleResult grid_oracle_equilibrium(OracleGame game, double k, double p,
                                     const ModelParams& params, int resolution);

}  // namespace liability
