#include "rulealg/stochastic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

#include <boost/numeric/odeint.hpp>

namespace rulealg {

void CTMCSpec::validate() const {
    for (const Transition& tr : transitions) {
        if (!(tr.rate > 0) || !std::isfinite(tr.rate)) {
            throw GraphError("CTMC spec: base rates must be positive and finite");
        }
        if (tr.rule.kind() != initial.kind()) {
            throw GraphError("CTMC spec: rule kind differs from the initial graph");
        }
    }
}

std::vector<NamedObservable> default_observables(GraphKind kind) {
    Multigraph vertex = discrete_graph(kind, 1);
    Multigraph edge(kind, {"v0", "v1"}, {{"e0", "v0", "v1"}});
    double edge_prefactor = kind == GraphKind::Undirected ? 0.5 : 1.0;
    return {{"vertices", Observable::counting(vertex), 1.0},
            {"edges", Observable::counting(edge), edge_prefactor}};
}

double evaluate_observable(const NamedObservable& o, const Multigraph& g) {
    return o.prefactor *
           static_cast<double>(find_matches(o.observable.as_rule(), g).size());
}

NumericStateVector hamiltonian_action(const CTMCSpec& spec,
                                      const NumericStateVector& psi) {
    spec.validate();
    if (auto k = psi.kind(); k && *k != spec.initial.kind()) {
        throw GraphError("hamiltonian_action: state kind differs from the spec");
    }
    NumericStateVector out;
    for (const auto& [key, term] : psi.terms()) {
        for (const Transition& tr : spec.transitions) {
            std::vector<GraphMorphism> matches = find_matches(tr.rule, term.graph);
            double c = term.coefficient * tr.rate;
            for (const GraphMorphism& m : matches) {
                Derivation d = derive_full(tr.rule, m, term.graph);
                out.add_keyed(d.result_key, c, d.result);
            }
            out.add_keyed(key, -c * static_cast<double>(matches.size()), term.graph);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Explicit generator over a finite state set
// ---------------------------------------------------------------------------

namespace {

struct ExplicitGenerator {
    std::vector<Multigraph> states;  // canonical representatives
    std::vector<CanonicalKey> keys;
    // column entries: per source state, (target index, rate); targets outside
    // the set appear as index -1
    std::vector<std::vector<std::pair<int, double>>> columns;
    std::vector<double> diagonal;
    std::vector<char> boundary;
};

ExplicitGenerator build_generator(const CTMCSpec& spec,
                                  const std::vector<Multigraph>& state_set) {
    ExplicitGenerator gen;
    std::map<CanonicalKey, int> index;
    for (const Multigraph& g : state_set) {
        CanonicalForm can = canonical_form(g);
        if (index.count(can.key)) continue;
        index[can.key] = static_cast<int>(gen.states.size());
        gen.states.push_back(std::move(can.representative));
        gen.keys.push_back(std::move(can.key));
    }
    int n = static_cast<int>(gen.states.size());
    gen.columns.resize(n);
    gen.diagonal.assign(n, 0.0);
    gen.boundary.assign(n, 0);
    for (int s = 0; s < n; ++s) {
        std::map<int, double> acc;
        for (size_t j = 0; j < spec.transitions.size(); ++j) {
            const Transition& tr = spec.transitions[j];
            std::vector<GraphMorphism> matches = find_matches(tr.rule, gen.states[s]);
            gen.diagonal[s] -= tr.rate * static_cast<double>(matches.size());
            for (const GraphMorphism& m : matches) {
                Derivation d = derive_full(tr.rule, m, gen.states[s]);
                auto it = index.find(d.result_key);
                int target = it == index.end() ? -1 : it->second;
                if (target < 0) gen.boundary[s] = 1;
                acc[target] += tr.rate;
            }
        }
        for (auto& [target, rate] : acc) gen.columns[s].emplace_back(target, rate);
    }
    return gen;
}

}  // namespace

GeneratorReport infinitesimal_generator_check(const CTMCSpec& spec,
                                              const std::vector<Multigraph>& state_set) {
    spec.validate();
    ExplicitGenerator gen = build_generator(spec, state_set);
    GeneratorReport report;
    constexpr double kTol = 1e-9;
    for (size_t s = 0; s < gen.states.size(); ++s) {
        // self-transitions fold into the diagonal (rho and the input
        // observable cancel there)
        double self_rate = 0.0, outflow = 0.0, off_min = 0.0;
        bool first = true;
        for (auto& [target, rate] : gen.columns[s]) {
            if (target == static_cast<int>(s)) {
                self_rate += rate;
                continue;
            }
            if (target >= 0) {
                if (first || rate < off_min) off_min = rate;
                first = false;
                outflow += rate;
            }
        }
        double diagonal = gen.diagonal[s] + self_rate;
        double column_sum = diagonal + outflow;
        bool closed = !gen.boundary[s];
        report.rows.push_back({gen.keys[s], diagonal, off_min, column_sum, closed});
        if (diagonal > kTol) report.diagonal_nonpositive = false;
        if (off_min < -kTol) report.off_diagonal_nonnegative = false;
        if (closed) {
            report.max_closed_column_residual =
                std::max(report.max_closed_column_residual, std::abs(column_sum));
            if (std::abs(column_sum) > kTol) report.closed_columns_sum_to_zero = false;
        } else {
            report.boundary_states.push_back(gen.keys[s]);
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Gillespie simulation
// ---------------------------------------------------------------------------

namespace {

/// One derivation step without canonical relabeling; SSA states are tracked
/// concretely and only canonicalized when events are recorded.
Multigraph apply_match_raw(const LinearRule& p, const GraphMorphism& m,
                           const Multigraph& x) {
    auto poc = pushout_complement(p.into_input(), m);
    if (!poc) throw GraphError("ssa: inadmissible match");
    return pushout(p.into_output(), poc->from_k).object;
}

Trajectory simulate_one(const CTMCSpec& spec, double t_max,
                        const std::vector<double>& times,
                        const std::vector<NamedObservable>& observables,
                        std::uint64_t seed, std::uint64_t stream,
                        bool record_events) {
    CounterRng rng(seed, stream);
    Trajectory traj;
    traj.stream = stream;
    traj.samples.assign(times.size(), std::vector<double>(observables.size(), 0.0));

    Multigraph state = spec.initial;
    double t = 0.0;
    size_t next_sample = 0;
    auto sample_state = [&](size_t upto) {
        for (; next_sample < upto; ++next_sample) {
            for (size_t j = 0; j < observables.size(); ++j) {
                traj.samples[next_sample][j] = evaluate_observable(observables[j], state);
            }
        }
    };

    std::vector<std::vector<GraphMorphism>> matches(spec.transitions.size());
    std::vector<double> propensity(spec.transitions.size(), 0.0);
    while (true) {
        double total = 0.0;
        for (size_t j = 0; j < spec.transitions.size(); ++j) {
            matches[j] = find_matches(spec.transitions[j].rule, state);
            propensity[j] = spec.transitions[j].rate *
                            static_cast<double>(matches[j].size());
            total += propensity[j];
        }
        if (!std::isfinite(total)) throw GraphError("ssa: propensity overflow");
        if (total <= 0.0) break;  // absorbed; state constant from here on

        double t_next = t + rng.next_exponential(total);
        size_t upto = next_sample;
        while (upto < times.size() && times[upto] <= t_next) ++upto;
        sample_state(std::min(upto, times.size()));
        if (t_next > t_max) {
            t = t_max;
            break;
        }

        size_t j = rng.next_categorical(propensity, total);
        const auto& ms = matches[j];
        size_t pick = static_cast<size_t>(rng.next_below(ms.size()));
        if (record_events) {
            Derivation d = derive_full(spec.transitions[j].rule, ms[pick], state);
            traj.events.push_back({t_next, static_cast<int>(j), d.result_key});
            state = std::move(d.result);
        } else {
            state = apply_match_raw(spec.transitions[j].rule, ms[pick], state);
        }
        t = t_next;
    }
    sample_state(times.size());  // remaining samples observe the final state
    return traj;
}

}  // namespace

std::vector<Trajectory> ssa_simulate(const CTMCSpec& spec, double t_max, int n_traj,
                                     std::uint64_t seed,
                                     const std::vector<double>& sample_times,
                                     const std::vector<NamedObservable>& observables,
                                     const SsaOptions& options) {
    spec.validate();
    if (t_max < 0) throw GraphError("ssa: t_max must be non-negative");
    if (n_traj < 1) throw GraphError("ssa: need at least one trajectory");
    std::vector<double> times = sample_times;
    if (!std::is_sorted(times.begin(), times.end())) {
        throw GraphError("ssa: sample times must be sorted ascending");
    }

    std::vector<Trajectory> out(n_traj);
    int workers = std::max(1, std::min<int>(options.workers, n_traj));
    if (workers == 1) {
        for (int i = 0; i < n_traj; ++i) {
            out[i] = simulate_one(spec, t_max, times, observables, seed, i,
                                  options.record_events);
        }
        return out;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n_traj; i = next.fetch_add(1)) {
                out[i] = simulate_one(spec, t_max, times, observables, seed, i,
                                      options.record_events);
            }
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

// ---------------------------------------------------------------------------
// Closed forms for the edge birth-death system
// ---------------------------------------------------------------------------

namespace {

void check_bd_args(int n_v, int n_e, double k_plus, double k_minus) {
    if (n_v < 0 || n_e < 0) throw GraphError("edge system: negative counts");
    if (k_plus < 0 || k_minus < 0 || !std::isfinite(k_plus) || !std::isfinite(k_minus)) {
        throw GraphError("edge system: rates must be non-negative and finite");
    }
}

/// Poisson intensity A(t) and binomial survival B(t); k_minus = 0 is the
/// analytic limit A = k+ C(n,2) t, B = 1.
std::pair<double, double> bd_parameters(int n_v, double k_plus, double k_minus,
                                        double t) {
    double pairs = 0.5 * static_cast<double>(n_v) * static_cast<double>(n_v - 1);
    if (k_minus > 0) {
        double decay = std::exp(-k_minus * t);
        return {(k_plus / k_minus) * pairs * (1.0 - decay), decay};
    }
    return {k_plus * pairs * t, 1.0};
}

}  // namespace

double edge_mgf_closed_form(int n_v, int n_e, double k_plus, double k_minus,
                            double t, double eps) {
    check_bd_args(n_v, n_e, k_plus, k_minus);
    auto [a, b] = bd_parameters(n_v, k_plus, k_minus, t);
    double u = std::expm1(eps);  // e^eps - 1
    return std::exp(a * u) * std::pow(u * b + 1.0, n_e);
}

double edge_moment_closed_form(int n_v, int n_e, double k_plus, double k_minus,
                               double t, int eps_order) {
    check_bd_args(n_v, n_e, k_plus, k_minus);
    auto [a, b] = bd_parameters(n_v, k_plus, k_minus, t);
    double mean = a + n_e * b;
    switch (eps_order) {
        case 0: return 1.0;
        case 1: return mean;
        case 2: return a + n_e * b * (1.0 - b) + mean * mean;
        default:
            throw GraphError("edge_moment_closed_form: eps_order must be 0, 1 or 2");
    }
}

std::vector<double> edge_distribution_closed_form(int n_v, int n_e, double k_plus,
                                                  double k_minus, double t,
                                                  double coverage) {
    check_bd_args(n_v, n_e, k_plus, k_minus);
    auto [a, b] = bd_parameters(n_v, k_plus, k_minus, t);

    // binomial(n_e, b) pmf
    std::vector<double> binom(n_e + 1, 0.0);
    for (int j = 0; j <= n_e; ++j) {
        double logp = std::lgamma(n_e + 1.0) - std::lgamma(j + 1.0) -
                      std::lgamma(n_e - j + 1.0);
        if (b > 0) logp += j * std::log(b);
        else if (j > 0) { binom[j] = 0.0; continue; }
        if (b < 1) logp += (n_e - j) * std::log1p(-b);
        else if (j < n_e) { binom[j] = 0.0; continue; }
        binom[j] = std::exp(logp);
    }

    std::vector<double> pois{std::exp(-a)};  // extended on demand
    std::vector<double> out;
    double cum = 0.0;
    const int hard_cap = 1 << 22;
    for (int n = 0; n < hard_cap; ++n) {
        while (static_cast<int>(pois.size()) <= n) {
            int m = static_cast<int>(pois.size());
            pois.push_back(pois.back() * a / m);
        }
        double p = 0.0;
        for (int j = std::max(0, n - static_cast<int>(pois.size()) + 1);
             j <= std::min(n, n_e); ++j) {
            p += binom[j] * pois[n - j];
        }
        out.push_back(p);
        cum += p;
        if (cum >= coverage && n >= n_e) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Master equation on a truncated state space
// ---------------------------------------------------------------------------

MasterEquationResult master_equation_integrate(
    const CTMCSpec& spec, const std::function<bool(const Multigraph&)>& keep,
    const std::vector<double>& t_grid) {
    spec.validate();
    if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
        throw GraphError("master equation: time grid must be sorted ascending");
    }

    CanonicalForm init = canonical_form(spec.initial);
    if (!keep(init.representative)) {
        throw GraphError("master equation: the initial graph fails the truncation predicate");
    }

    // breadth-first closure under one-step successors within the truncation
    MasterEquationResult res;
    std::map<CanonicalKey, int> index;
    index[init.key] = 0;
    res.states.push_back(init.representative);
    res.keys.push_back(init.key);
    std::vector<std::vector<std::pair<int, double>>> columns;
    std::vector<double> diagonal;
    for (size_t s = 0; s < res.states.size(); ++s) {
        std::map<int, double> acc;
        double diag = 0.0;
        bool leaks = false;
        for (const Transition& tr : spec.transitions) {
            std::vector<GraphMorphism> matches = find_matches(tr.rule, res.states[s]);
            diag -= tr.rate * static_cast<double>(matches.size());
            for (const GraphMorphism& m : matches) {
                Derivation d = derive_full(tr.rule, m, res.states[s]);
                auto it = index.find(d.result_key);
                int target;
                if (it != index.end()) {
                    target = it->second;
                } else if (keep(d.result)) {
                    target = static_cast<int>(res.states.size());
                    index[d.result_key] = target;
                    res.states.push_back(d.result);
                    res.keys.push_back(d.result_key);
                } else {
                    leaks = true;
                    continue;
                }
                acc[target] += tr.rate;
            }
        }
        res.boundary.push_back(leaks ? 1 : 0);
        columns.emplace_back(acc.begin(), acc.end());
        diagonal.push_back(diag);
    }

    int n = static_cast<int>(res.states.size());
    using Vec = std::vector<double>;
    auto system = [&](const Vec& psi, Vec& dpsi, double) {
        std::fill(dpsi.begin(), dpsi.end(), 0.0);
        for (int s = 0; s < n; ++s) {
            double p = psi[s];
            if (p == 0.0) continue;
            dpsi[s] += diagonal[s] * p;
            for (auto& [target, rate] : columns[s]) dpsi[target] += rate * p;
        }
    };

    Vec psi(n, 0.0);
    psi[0] = 1.0;
    namespace odeint = boost::numeric::odeint;
    auto stepper = odeint::make_controlled(1e-10, 1e-10,
                                           odeint::runge_kutta_dopri5<Vec>());
    double t_cur = 0.0;
    for (double t : t_grid) {
        if (t > t_cur) {
            odeint::integrate_adaptive(stepper, system, psi, t_cur, t,
                                       std::min(0.1, t - t_cur));
            t_cur = t;
        }
        NumericStateVector sv;
        double mass = 0.0;
        for (int s = 0; s < n; ++s) {
            sv.add_keyed(res.keys[s], psi[s], res.states[s]);
            mass += psi[s];
        }
        res.grid_states.push_back(std::move(sv));
        res.leakage.push_back(1.0 - mass);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Edge birth-death helpers
// ---------------------------------------------------------------------------

CTMCSpec edge_birth_death_spec(int n_v, int n_e, double k_plus, double k_minus) {
    check_bd_args(n_v, n_e, k_plus, k_minus);
    if (n_e > 0 && n_v < 2) {
        throw GraphError("edge_birth_death_spec: edges require at least two vertices");
    }
    Multigraph base = discrete_graph(GraphKind::Undirected, n_v);
    std::vector<EdgeSpec> edges;
    if (n_e > 0) {
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < n_v; ++i) {
            for (int j = i + 1; j < n_v; ++j) pairs.emplace_back(i, j);
        }
        int width = 1;
        for (int t = n_e - 1; t >= 10; t /= 10) ++width;
        for (int e = 0; e < n_e; ++e) {
            auto [i, j] = pairs[e % pairs.size()];
            std::string s = std::to_string(e);
            edges.push_back({"e" + std::string(width - s.size(), '0') + s,
                             base.vertex_id(i), base.vertex_id(j)});
        }
    }
    Multigraph initial(GraphKind::Undirected, base.vertex_ids(), edges);
    CTMCSpec spec{{}, initial};
    if (k_plus > 0) spec.transitions.push_back({edge_create_rule(), k_plus / 2});
    if (k_minus > 0) spec.transitions.push_back({edge_delete_rule(), k_minus / 2});
    spec.validate();
    return spec;
}

std::optional<EdgeBirthDeathParams> identify_edge_birth_death(const CTMCSpec& spec) {
    if (spec.initial.kind() != GraphKind::Undirected) return std::nullopt;
    static const RuleKey create_key = rule_key(edge_create_rule());
    static const RuleKey delete_key = rule_key(edge_delete_rule());
    double k_plus = 0.0, k_minus = 0.0;
    for (const Transition& tr : spec.transitions) {
        RuleKey key = rule_key(tr.rule);
        if (key == create_key) k_plus += 2 * tr.rate;
        else if (key == delete_key) k_minus += 2 * tr.rate;
        else return std::nullopt;
    }
    return EdgeBirthDeathParams{spec.initial.vertex_count(), spec.initial.edge_count(),
                                k_plus, k_minus};
}

}  // namespace rulealg
