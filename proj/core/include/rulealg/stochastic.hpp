#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rulealg/representation.hpp"
#include "rulealg/rng.hpp"

namespace rulealg {

struct Transition {
    LinearRule rule;
    double rate;  // base rate, > 0
};

/// A continuous-time Markov chain given by transition rules with base rates
/// and an initial graph. The jump rate of transition j in state X is
/// rate_j * |find_matches(rule_j, X)|.
struct CTMCSpec {
    std::vector<Transition> transitions;
    Multigraph initial;

    /// Throws GraphError on non-positive/non-finite rates or kind mismatch.
    void validate() const;
};

struct NamedObservable {
    std::string name;
    Observable observable;
    double prefactor;  // applied to the raw match count
};

/// Vertex- and edge-counting observables for the given kind. The edge
/// counter carries a 1/2 prefactor for undirected graphs (two monos per
/// edge).
std::vector<NamedObservable> default_observables(GraphKind kind);

double evaluate_observable(const NamedObservable& o, const Multigraph& g);

/// H applied to psi: sum_j rate_j (rho(rule_j) - O_{input_j}) psi. The
/// projection of the result is always 0.
NumericStateVector hamiltonian_action(const CTMCSpec& spec,
                                      const NumericStateVector& psi);

/// Explicit generator matrix over a finite state set with the three
/// infinitesimal-generator conditions checked: non-positive diagonal,
/// non-negative off-diagonal entries, and zero column sums for states whose
/// one-step successors all lie inside the set. States with successors
/// outside the set are reported as truncation boundary, not as failures.
struct GeneratorReport {
    struct StateRow {
        CanonicalKey state;
        double diagonal;
        double min_off_diagonal;
        double column_sum;       // total outflow minus diagonal
        bool one_step_closed;
    };
    std::vector<StateRow> rows;
    bool diagonal_nonpositive = true;
    bool off_diagonal_nonnegative = true;
    bool closed_columns_sum_to_zero = true;
    double max_closed_column_residual = 0.0;
    std::vector<CanonicalKey> boundary_states;
};

GeneratorReport infinitesimal_generator_check(const CTMCSpec& spec,
                                              const std::vector<Multigraph>& state_set);

struct TrajectoryEvent {
    double time;
    int transition;      // index into spec.transitions
    CanonicalKey state;  // state after the jump
};

/// One realization of the chain. Events are recorded only when requested;
/// samples[i][j] is observable j evaluated at sample time i in the
/// left-limit state (so a sample at t = 0 sees the initial graph).
struct Trajectory {
    std::uint64_t stream;
    std::vector<TrajectoryEvent> events;
    std::vector<std::vector<double>> samples;
};

struct SsaOptions {
    int workers = 1;
    bool record_events = true;
};

/// Gillespie direct method. Trajectory i uses the deterministic RNG stream
/// (seed, i); results are bit-identical for a given (spec, seed) regardless
/// of worker count. Sample times beyond t_max observe the final state.
std::vector<Trajectory> ssa_simulate(const CTMCSpec& spec, double t_max, int n_traj,
                                     std::uint64_t seed,
                                     const std::vector<double>& sample_times,
                                     const std::vector<NamedObservable>& observables,
                                     const SsaOptions& options = {});

/// Moment generating function E(t; eps) of the edge count for the edge
/// birth-death system on n_v vertices with n_e initial edges. k_minus = 0 is
/// the creation-only analytic limit.
double edge_mgf_closed_form(int n_v, int n_e, double k_plus, double k_minus,
                            double t, double eps);

/// eps-derivative of E(t; eps) at eps = 0 of order 0, 1 or 2 (value, mean
/// edge count, second moment of the edge count).
double edge_moment_closed_form(int n_v, int n_e, double k_plus, double k_minus,
                               double t, int eps_order);

/// Edge-count distribution at time t: the convolution of
/// Poisson((k+/k-) C(n_v,2) (1 - e^{-k- t})) with Binomial(n_e, e^{-k- t}),
/// as explicit probabilities p[0..] truncated once cumulative mass reaches
/// the requested coverage.
std::vector<double> edge_distribution_closed_form(int n_v, int n_e, double k_plus,
                                                  double k_minus, double t,
                                                  double coverage = 1.0 - 1e-12);

struct MasterEquationResult {
    std::vector<Multigraph> states;  // canonical representatives
    std::vector<CanonicalKey> keys;
    std::vector<char> boundary;      // state has successors outside the truncation
    std::vector<NumericStateVector> grid_states;
    std::vector<double> leakage;     // 1 - total mass at each grid time
};

/// Dense integration of dpsi/dt = H psi on the truncated state space reached
/// from the initial graph through states accepted by the predicate
/// (adaptive Dormand-Prince, abs/rel tolerance 1e-10). Mass lost through
/// truncation-boundary states is reported per grid time.
MasterEquationResult master_equation_integrate(
    const CTMCSpec& spec, const std::function<bool(const Multigraph&)>& keep,
    const std::vector<double>& t_grid);

/// Edge birth-death CTMC: edge creation at base rate k_plus/2 and deletion
/// at k_minus/2 (the 1/2 compensates the two monos per vertex pair / edge),
/// starting from n_v vertices with n_e edges distributed round-robin over
/// vertex pairs. Zero rates drop the corresponding transition.
CTMCSpec edge_birth_death_spec(int n_v, int n_e, double k_plus, double k_minus);

struct EdgeBirthDeathParams {
    int n_v;
    int n_e;
    double k_plus;
    double k_minus;
};

/// Recognizes a spec whose transitions are all isomorphic to the bare edge
/// creation/deletion rules; returns the aggregate parameters (k = 2 * rate).
std::optional<EdgeBirthDeathParams> identify_edge_birth_death(const CTMCSpec& spec);

}  // namespace rulealg
