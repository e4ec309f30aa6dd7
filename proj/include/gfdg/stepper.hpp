/// @file stepper.hpp
/// Time stepping for the energy-quadratized RK-DG scheme.
///
/// One step advances (u_h, q_h, U, U_h) by solving the linear stage system
/// with frozen kernels H(u*_i), then updating
///   u^{n+1}  = u^n + tau sum_i b_i xi_i,
///   q^{n+1}  = L_h u^{n+1},
///   U^{n+1}  = U_h^n + tau sum_i b_i l_i      (pointwise at quadrature nodes),
///   U_h^{n+1} = Pi U^{n+1},
/// with l_i = (1/2) H(u*_i) xi_i. The stage extrapolants u*_i come from a
/// Lagrange polynomial through the previous step's endpoint and stage
/// snapshots (s+2 points), optionally refined by prediction iterations that
/// freeze the nonlinear term fully on the right-hand side.
#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "gfdg/stage_system.hpp"

namespace gfdg {

/// Snapshots needed by the next step's extrapolation.
struct StepHistory {
    double t_prev = 0.0;
    DGField u_prev;
    DGField U_h_prev;
    std::vector<double> stage_times;
    std::vector<DGField> stage_u;    // corrected stage values u~_i
    std::vector<DGField> stage_U;    // projected corrected auxiliaries Pi U~_i
};

struct StepState {
    double t = 0.0;
    DGField u_h;
    DGField q_h;      // q_h = L_h u_h at all times
    QuadField U;      // pointwise auxiliary (not in V_h)
    DGField U_h;      // Pi U
    std::optional<StepHistory> history;
};

/// Per-stage solution fields of one step.
struct StageResult {
    std::vector<DGField> xi;
    std::vector<DGField> qtilde;
    std::vector<DGField> u_tilde;
    std::vector<QuadField> l;
    std::vector<QuadField> U_tilde;
    std::vector<DGField> U_tilde_h;
};

struct StepDiagnostics {
    double energy = 0.0;             // E = 1/2 ||q||^2 + ||U_h||^2 after the step
    double energy_shifted = 0.0;     // E - C0 |Omega|
    double dissipation_bound = 0.0;  // tau sum_i b_i ||xi_i||^2
    double solver_residual = 0.0;
    int solver_iterations = 0;
    int pc_iterations = 0;
};

/// Barycentric-free Lagrange weights: w_p = prod_{q != p} (t-t_q)/(t_p-t_q).
inline std::vector<double> lagrange_weights(const std::vector<double>& nodes, double t)
{
    const int n = static_cast<int>(nodes.size());
    std::vector<double> w(n, 1.0);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            if (q == p) continue;
            const double denom = nodes[p] - nodes[q];
            if (denom == 0.0)
                throw std::runtime_error("lagrange_weights: coincident interpolation nodes");
            w[p] *= (t - nodes[q]) / denom;
        }
    return w;
}

class Stepper {
public:
    Stepper(std::shared_ptr<const GOperator> G, Potential pot, ButcherTableau tab,
            double tau, SolverOptions solver_opts = {}, SourceFn source = {},
            bool allow_uncertified = false)
        : G_(std::move(G)),
          space_(G_->space_ptr()),
          pot_(std::move(pot)),
          tab_(std::move(tab)),
          tau_(tau),
          source_(std::move(source)),
          solver_(*G_, tab_, tau, solver_opts)
    {
        if (tau_ < 0.0) throw std::invalid_argument("Stepper: negative time step");
        const auto verdict = certify_algebraically_stable(tab_);
        if (!verdict.stable && !allow_uncertified)
            throw std::invalid_argument(
                "Stepper: tableau '" + tab_.name + "' is not algebraically stable (" +
                verdict.reason + "); pass allow_uncertified to run it anyway");
    }

    const DGSpace& space() const { return *space_; }
    const Potential& potential() const { return pot_; }
    const ButcherTableau& tableau() const { return tab_; }
    double tau() const { return tau_; }

    /// Initial state from a pointwise initial condition: u_h = Pi u0 and
    /// U(x,0) = sqrt(Phi(u0(x)) + C0) sampled at quadrature nodes.
    StepState initial_state(const ScalarFn& u0) const
    {
        StepState st;
        st.t = 0.0;
        const QuadField u0_nodes = sample_at_quad(space_, u0);
        st.u_h = project(u0_nodes);
        st.q_h = G_->apply_Lh(st.u_h);
        st.U = apply_sqrt_shifted(pot_, u0_nodes);
        st.U_h = project(st.U);
        return st;
    }

    /// Initial state from DG initial data (e.g. seeded random cell means);
    /// the auxiliary is initialized from the nodal values of u_h itself.
    StepState initial_state(const DGField& u0) const
    {
        StepState st;
        st.t = 0.0;
        st.u_h = u0;
        st.q_h = G_->apply_Lh(st.u_h);
        st.U = apply_sqrt_shifted(pot_, eval_at_quad(u0));
        st.U_h = project(st.U);
        return st;
    }

    /// Stage extrapolants (u*_i, U*_i) at times t_n + c_i tau. Before any
    /// history exists both fall back to the constant extrapolation
    /// u*_i = u_h^n, U*_i = U_h^n.
    std::pair<std::vector<DGField>, std::vector<DGField>>
    extrapolate_history(const StepState& st) const
    {
        const int s = tab_.stages();
        std::vector<DGField> ustar, Ustar;
        if (!st.history) {
            ustar.assign(s, st.u_h);
            Ustar.assign(s, st.U_h);
            return {std::move(ustar), std::move(Ustar)};
        }
        const StepHistory& h = *st.history;
        // Interpolation nodes: previous endpoint, previous stage times, and
        // the current endpoint. Stage nodes that coincide with either
        // endpoint (e.g. c_s = 1) are dropped; the endpoint value wins.
        std::vector<double> nodes{h.t_prev};
        std::vector<const DGField*> uvals{&h.u_prev};
        std::vector<const DGField*> Uvals{&h.U_h_prev};
        const double coincident = 1e-12 * std::max({1.0, tau_, std::abs(st.t)});
        for (std::size_t j = 0; j < h.stage_times.size(); ++j) {
            const double tj = h.stage_times[j];
            bool dup = std::abs(tj - st.t) < coincident;
            for (double existing : nodes)
                dup = dup || std::abs(tj - existing) < coincident;
            if (dup) continue;
            nodes.push_back(tj);
            uvals.push_back(&h.stage_u[j]);
            Uvals.push_back(&h.stage_U[j]);
        }
        nodes.push_back(st.t);
        uvals.push_back(&st.u_h);
        Uvals.push_back(&st.U_h);

        for (int i = 0; i < s; ++i) {
            const std::vector<double> w = lagrange_weights(nodes, st.t + tab_.c[i] * tau_);
            DGField ui(space_), Ui(space_);
            for (std::size_t p = 0; p < nodes.size(); ++p) {
                ui.coeff() += w[p] * uvals[p]->coeff();
                Ui.coeff() += w[p] * Uvals[p]->coeff();
            }
            ustar.push_back(std::move(ui));
            Ustar.push_back(std::move(Ui));
        }
        return {std::move(ustar), std::move(Ustar)};
    }

    /// One correction step with given stage extrapolants.
    std::pair<StepState, StageResult> rk_step(const StepState& st,
                                              const std::vector<DGField>& u_star,
                                              StepDiagnostics* diag = nullptr)
    {
        const int s = tab_.stages();
        if (static_cast<int>(u_star.size()) != s)
            throw std::invalid_argument("rk_step: one extrapolant per stage required");

        std::vector<QuadField> H;
        H.reserve(s);
        for (int i = 0; i < s; ++i) H.push_back(apply_H(pot_, eval_at_quad(u_star[i])));
        const QuadField Uh_nodes = eval_at_quad(st.U_h);

        StageSystem sys = assemble_stage_system(*G_, tab_, tau_, st.u_h, Uh_nodes, H,
                                                source_ ? &source_ : nullptr, st.t);
        StageSolution sol = solver_.solve(sys);

        StageResult res;
        res.xi = std::move(sol.xi);
        res.qtilde = std::move(sol.qtilde);
        res.l.reserve(s);
        for (int i = 0; i < s; ++i) {
            QuadField li(space_);
            li.values() = 0.5 * H[i].values().cwiseProduct(eval_at_quad(res.xi[i]).values());
            res.l.push_back(std::move(li));
        }
        for (int i = 0; i < s; ++i) {
            DGField ut = st.u_h;
            QuadField Ut = Uh_nodes;
            for (int j = 0; j < s; ++j) {
                const double a = tab_.A(i, j);
                if (a == 0.0) continue;
                ut.coeff() += tau_ * a * res.xi[j].coeff();
                Ut.values() += tau_ * a * res.l[j].values();
            }
            res.u_tilde.push_back(std::move(ut));
            res.U_tilde_h.push_back(project(Ut));
            res.U_tilde.push_back(std::move(Ut));
        }

        StepState out;
        out.t = st.t + tau_;
        out.u_h = st.u_h;
        out.U = Uh_nodes;
        double bound = 0.0;
        for (int i = 0; i < s; ++i) {
            out.u_h.coeff() += tau_ * tab_.b[i] * res.xi[i].coeff();
            out.U.values() += tau_ * tab_.b[i] * res.l[i].values();
            bound += tab_.b[i] * res.xi[i].coeff().squaredNorm();
        }
        out.q_h = G_->apply_Lh(out.u_h);
        out.U_h = project(out.U);

        StepHistory hist;
        hist.t_prev = st.t;
        hist.u_prev = st.u_h;
        hist.U_h_prev = st.U_h;
        for (int i = 0; i < s; ++i) {
            hist.stage_times.push_back(st.t + tab_.c[i] * tau_);
            hist.stage_u.push_back(res.u_tilde[i]);
            hist.stage_U.push_back(res.U_tilde_h[i]);
        }
        out.history = std::move(hist);

        if (diag) {
            diag->dissipation_bound = tau_ * bound;
            diag->solver_residual = sol.residual;
            diag->solver_iterations = sol.iterations;
            diag->energy = 0.5 * out.q_h.coeff().squaredNorm() + out.U_h.coeff().squaredNorm();
            diag->energy_shifted =
                diag->energy - pot_.C0 * space_->mesh().domain_measure();
        }
        return {std::move(out), std::move(res)};
    }

    /// One prediction-correction step. Up to `max_iterations` prediction
    /// sweeps refine the stage extrapolants, stopping early when
    /// max_i ||u~^{m+1}_i - u~^m_i||_inf < tol; with max_iterations = 0 the
    /// step is plain rk_step on the Lagrange extrapolants.
    std::pair<StepState, StageResult> pc_step(const StepState& st, int max_iterations,
                                              double tol, StepDiagnostics* diag = nullptr)
    {
        if (max_iterations < 0)
            throw std::invalid_argument("pc_step: negative iteration cap");
        auto [u_star, U_star] = extrapolate_history(st);
        int used = 0;
        if (max_iterations > 0) {
            const QuadField Uh_nodes = eval_at_quad(st.U_h);
            std::vector<DGField> u_cur = std::move(u_star);
            std::vector<DGField> Uh_cur = std::move(U_star);
            const int s = tab_.stages();
            for (int m = 0; m < max_iterations; ++m) {
                std::vector<QuadField> frozen;
                frozen.reserve(s);
                for (int i = 0; i < s; ++i) {
                    QuadField g(space_);
                    g.values() = apply_H(pot_, eval_at_quad(u_cur[i]))
                                     .values()
                                     .cwiseProduct(eval_at_quad(Uh_cur[i]).values());
                    frozen.push_back(std::move(g));
                }
                StageSystem psys = assemble_prediction_system(
                    *G_, tab_, tau_, st.u_h, frozen, source_ ? &source_ : nullptr, st.t);
                StageSolution psol = solver_.solve(psys);

                std::vector<DGField> u_next;
                u_next.reserve(s);
                for (int i = 0; i < s; ++i) {
                    DGField ui = st.u_h;
                    for (int j = 0; j < s; ++j) {
                        const double a = tab_.A(i, j);
                        if (a != 0.0) ui.coeff() += tau_ * a * psol.xi[j].coeff();
                    }
                    u_next.push_back(std::move(ui));
                }
                std::vector<QuadField> l(s);
                for (int i = 0; i < s; ++i) {
                    l[i] = QuadField(space_);
                    l[i].values() = 0.5 * apply_H(pot_, eval_at_quad(u_next[i]))
                                              .values()
                                              .cwiseProduct(eval_at_quad(psol.xi[i]).values());
                }
                for (int i = 0; i < s; ++i) {
                    QuadField Ui = Uh_nodes;
                    for (int j = 0; j < s; ++j) {
                        const double a = tab_.A(i, j);
                        if (a != 0.0) Ui.values() += tau_ * a * l[j].values();
                    }
                    Uh_cur[i] = project(Ui);
                }
                double delta = 0.0;
                for (int i = 0; i < s; ++i) {
                    DGField d = u_next[i] - u_cur[i];
                    delta = std::max(delta, linf_norm(d));
                }
                u_cur = std::move(u_next);
                used = m + 1;
                if (delta < tol) break;
            }
            u_star = std::move(u_cur);
        }
        auto out = rk_step(st, u_star, diag);
        if (diag) diag->pc_iterations = used;
        return out;
    }

    /// Drive n steps of pc_step; `on_step` (if set) observes each new state.
    using StepCallback =
        std::function<void(int step, const StepState&, const StepDiagnostics&)>;

    StepState run(StepState st, int n_steps, int pc_iterations, double pc_tol,
                  const StepCallback& on_step = {})
    {
        for (int n = 0; n < n_steps; ++n) {
            StepDiagnostics diag;
            auto [next, stages] = pc_step(st, pc_iterations, pc_tol, &diag);
            st = std::move(next);
            if (on_step) on_step(n + 1, st, diag);
        }
        return st;
    }

private:
    std::shared_ptr<const GOperator> G_;
    SpacePtr space_;
    Potential pot_;
    ButcherTableau tab_;
    double tau_;
    SourceFn source_;
    StageSolver solver_;
};

} // namespace gfdg
