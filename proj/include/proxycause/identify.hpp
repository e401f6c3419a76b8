#pragma once

#include "proxycause/adjust.hpp"
#include "proxycause/graph.hpp"
#include "proxycause/latent_model.hpp"
#include "proxycause/table.hpp"

#include <Eigen/Dense>

namespace proxycause {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Tolerances {
    double singular = 1e-10;  // smallest singular value relative to the infinity norm
    double gap = 1e-6;        // eigenvalue separation; also the imaginary-part cutoff
    double residual = 1e-8;   // eigenvector residual
    double pivot = 1e-10;     // first-column entries of the inverse eigenvector matrices
    double prob = 1e-6;       // slack before a recovered probability counts as out of range
    double diag = 1e-6;       // off-diagonal mass allowed in recovered diagonal matrices
    double order = 1e-6;      // minimum separation of recovered priors
    double recon = 1e-6;      // replaying the mixture against the observables
};

/// Role assignment for identification through two proxies of a latent U.
struct ProxyDesign {
    Variable latent;  // name and ordered categories u_1..u_k
    bool order_known = true;
    std::vector<std::string> s_vars;
    std::vector<std::string> t_vars;
    std::vector<std::string> w_vars;
    std::vector<std::string> z_vars;
    /// k-1 distinct value vectors over s_vars (resp. t_vars).
    std::vector<std::vector<std::string>> s_select;
    std::vector<std::vector<std::string>> t_select;
    /// The W value vector used to form Q.
    std::vector<std::string> w_select;

    std::size_t k() const { return latent.categories.size(); }

    /// Fills empty selections with the first value vectors in declared order.
    ProxyDesign with_defaults(const FloatTable& table) const;
    /// Throws DesignError (or UnknownVariableError) if the design does not fit the table.
    void validate(const FloatTable& table) const;
};

ProxyDesign design_from_json(const nlohmann::json& j);
nlohmann::json design_to_json(const ProxyDesign& d);

/// Design matching a generated model: S, T proxies, W auxiliary, Z strata,
/// first k-1 proxy categories selected, first W category in Q.
ProxyDesign design_for(const LatentModelSpec& spec);

struct StratumMatrices {
    Assignment z;
    Matrix P;
    Matrix Q;
};

/// P holds f(t_j|z), f(s_i|z), f(s_i,t_j|z) around a leading 1; Q is the same
/// layout with the W value vector conjoined.
StratumMatrices build_PQ(const FloatTable& table, const ProxyDesign& design, const Assignment& z);
Matrix build_Q(const FloatTable& table, const ProxyDesign& design, const Assignment& z,
               const std::vector<std::string>& w_values);

struct EigenSystem {
    Vector lambdas;  // ascending
    Matrix A1;       // columns solve (Q - lambda P) x = 0
    Matrix A2;       // columns solve (Q' - lambda P') x = 0
    double residual = 0;
};

/// Real, positive, distinct roots of |Q - lambda P| = 0 with both families of
/// eigenvectors. k <= 16.
EigenSystem generalized_eigs(const Matrix& P, const Matrix& Q, const Tolerances& tol = {});

/// One stratum's factors, rows indexed by eigenvalue order (not yet labeled).
struct RecoveredFactors {
    Vector lambdas;  // diagonal of Delta for the design's w
    Matrix P1;       // rows [1, f(t_1|u), ..., f(t_{k-1}|u)]
    Matrix P2;       // rows [1, f(s_1|u), ..., f(s_{k-1}|u)]
    Vector m;        // f(u|z)
    Vector e1;       // normalizers 1 / a1^{i,1}
    Vector e2;
    double offdiag = 0;   // largest off-diagonal entry of P2'^-1 P P1^-1
    double residual_P = 0;  // |P2' M P1 - P|_inf
    double residual_Q = 0;  // |P2' M Delta P1 - Q|_inf
};

RecoveredFactors recover_factors(const EigenSystem& sys, const Matrix& P, const Matrix& Q,
                                 const Tolerances& tol = {});

/// diag(P1 P^-1 Q_w P1^-1): f(w|u_i, z) for any W value vector, holding the
/// eigenvector basis fixed.
Vector recover_delta(const RecoveredFactors& f, const Matrix& P, const Matrix& Qw,
                     const Tolerances& tol = {});

struct StratumIdentification {
    Assignment z;
    double fz = 0;
    StratumMatrices matrices;
    /// Everything below is in latent category order u_1..u_k.
    Vector lambdas;
    Vector m;
    Matrix P1;
    Matrix P2;
    std::vector<std::vector<std::string>> w_values;
    std::vector<Vector> w_given_u;  // parallel to w_values
    std::vector<std::size_t> eigen_index;  // category -> eigenvalue rank
    double offdiag = 0;
    double residual_P = 0;
    double residual_Q = 0;
    double residual_w = 0;  // max |sum_i f(w|u_i,z) f(u_i|z) - f(w|z)|
};

struct IdentificationResult {
    ProxyDesign design;
    std::vector<StratumIdentification> strata;
    FloatTable joint;  // over U, W..., Z...
};

/// Recovers f(u, w, z) stratum by stratum. Requires design.order_known.
IdentificationResult identify_joint(const FloatTable& table, const ProxyDesign& design,
                                    const Tolerances& tol = {});

struct EffectResult {
    Criterion criterion = Criterion::backdoor;
    VertexSet adjustment;
    Setting exposure;
    std::string outcome;
    FloatTable distribution;  // f(outcome | set(exposure))
};

/// Identifies f(y | set(x)) when one of x, y is the design's latent variable.
EffectResult identify_causal_effect(const FloatTable& table, const CausalDiagram& g,
                                    const ProxyDesign& design, const Setting& x,
                                    const std::string& y, const Tolerances& tol = {});
EffectResult identify_causal_effect(const IdentificationResult& identified, const CausalDiagram& g,
                                    const Setting& x, const std::string& y);

struct OrderFreeStratum {
    Assignment z;
    double fz = 0;
    double fx_given_z = 0;
    std::vector<double> candidates;  // lambda_i m_i / f(x|z), eigenvalue order
};

struct OrderFreeBounds {
    double lower = 0;
    double upper = 1;
    std::vector<OrderFreeStratum> strata;
};

/// Bounds on f(u | set(x)) valid under every labeling of the latent categories,
/// for designs whose W is exactly the exposure.
OrderFreeBounds order_free_bounds(const FloatTable& table, const ProxyDesign& design, const Setting& x,
                                  const Tolerances& tol = {});

/// Chooses the k-1 value vectors of S and of T that maximize |det P| in the
/// given stratum. For proxies with more than k categories.
ProxyDesign select_by_determinant(const FloatTable& table, const ProxyDesign& design,
                                  const Assignment& z = {});

nlohmann::json identification_to_json(const IdentificationResult& r);

}  // namespace proxycause
