#include "fcs/horizon.hpp"

namespace fcs {

AugmentedModelT augment_ft(const PlantMatrices& pm, const FilterMatrices& fm) {
    AugmentedModelT m;
    m.A.setZero();
    m.A.topLeftCorner<2, 2>() = pm.A;
    m.A.bottomRightCorner<2, 2>() = fm.A;
    m.B.setZero();
    m.B.topLeftCorner<2, 3>() = pm.B;
    m.B.bottomRightCorner<2, 3>() = fm.B;
    m.C.setZero();
    m.C.topLeftCorner<2, 2>().setIdentity();
    m.C.bottomRightCorner<1, 2>() = fm.C;
    m.D.setZero();
    m.D.topLeftCorner<2, 3>() = pm.D;
    return m;
}

AugmentedModelS augment_fl(const PlantMatrices& pm) {
    AugmentedModelS m;
    m.A = pm.A;
    m.B.setZero();
    m.B.leftCols<3>() = pm.B;  // slack column stays exactly zero
    m.C.setIdentity();
    m.D = pm.D;
    return m;
}

Prediction build_prediction(const MatrixXd& A, const MatrixXd& B, const MatrixXd& C,
                            const MatrixXd& D, int N_p) {
    if (N_p < 1) throw std::invalid_argument("build_prediction: N_p must be >= 1");
    const Eigen::Index n = A.rows();
    const Eigen::Index m = B.cols();
    const Eigen::Index q = C.rows();

    Prediction pr;
    pr.Gamma = MatrixXd::Zero(q * N_p, n);
    pr.Upsilon = MatrixXd::Zero(q * N_p, m * N_p);
    pr.Psi = MatrixXd::Zero(q * N_p, 3 * N_p);

    // Powers A^1 .. A^Np and the first block columns C A^j B, C A^j D.
    MatrixXd Apow = MatrixXd::Identity(n, n);
    std::vector<MatrixXd> CAB(N_p), CAD(N_p);
    for (int i = 0; i < N_p; ++i) {
        CAB[i] = C * Apow * B;
        CAD[i] = C * Apow * D;
        Apow = A * Apow;  // now A^(i+1)
        pr.Gamma.middleRows(q * i, q) = C * Apow;
    }
    for (int i = 0; i < N_p; ++i) {
        for (int j = 0; j <= i; ++j) {
            pr.Upsilon.block(q * i, m * j, q, m) = CAB[i - j];
            pr.Psi.block(q * i, 3 * j, q, 3) = CAD[i - j];
        }
    }
    return pr;
}

void build_pi_e_ft(int N_p, MatrixXd& Pi, MatrixXd& E) {
    if (N_p < 1) throw std::invalid_argument("build_pi_e_ft: N_p must be >= 1");
    const int n = 6 * N_p;
    Pi = MatrixXd::Zero(n, n);
    E = MatrixXd::Zero(n, 6);
    const Eigen::Matrix3d I3 = Eigen::Matrix3d::Identity();
    for (int s = 0; s < N_p; ++s) {
        Pi.block<3, 3>(6 * s, 6 * s) = I3;           // delta_u rows pick u(k+s)
        Pi.block<3, 3>(6 * s + 3, 6 * s + 3) = I3;   // p rows pick p(k+s)
        if (s > 0) Pi.block<3, 3>(6 * s, 6 * (s - 1)) = -I3;
    }
    E.block<3, 3>(0, 0) = I3;  // first delta_u subtracts u(k-1); p part unused
}

void build_pi_e_l_fl(int N_p, MatrixXd& Pi, MatrixXd& E, MatrixXd& L) {
    if (N_p < 1) throw std::invalid_argument("build_pi_e_l_fl: N_p must be >= 1");
    const int n = 4 * N_p;
    Pi = MatrixXd::Zero(n, n);
    E = MatrixXd::Zero(n, 4);
    L = MatrixXd::Zero(N_p, n);
    const Eigen::Matrix3d I3 = Eigen::Matrix3d::Identity();
    for (int s = 0; s < N_p; ++s) {
        Pi.block<3, 3>(4 * s, 4 * s) = I3;           // slack rows stay zero
        if (s > 0) Pi.block<3, 3>(4 * s, 4 * (s - 1)) = -I3;
        L(s, 4 * s + 3) = 1.0;
    }
    E.block<3, 3>(0, 0) = I3;
}

namespace {

void finish_assembly(HorizonProblem& hp) {
    hp.H = 0.5 * (hp.H + hp.H.transpose().eval());  // enforce exact symmetry
    try {
        hp.V = lower_generator(hp.H);
    } catch (const NotPositiveDefinite&) {
        throw NotPositiveDefinite("assemble: Hessian is not positive definite (check weights)");
    }
    hp.V_rows = hp.V;
    // Fold Psi for a grid voltage held constant over the horizon.
    const Eigen::Index rows = hp.Psi.rows();
    hp.Psi_sum = MatrixXd::Zero(rows, 3);
    for (int b = 0; b < hp.N_p; ++b) hp.Psi_sum += hp.Psi.middleCols(3 * b, 3);
    // Slack-state propagators used by the future-cost bound.
    hp.c_a_pow.resize(hp.N_p);
    Eigen::RowVector2d ca = hp.filter_mats.C;
    for (int nn = 0; nn < hp.N_p; ++nn) {
        ca = ca * hp.filter_mats.A;
        hp.c_a_pow[nn] = ca;
    }
}

}  // namespace

HorizonProblem assemble_ft(const SystemParams& sys, const FilterParams& fp,
                           const CostWeights& w, int N_p) {
    if (N_p < 1) throw std::invalid_argument("assemble_ft: N_p must be >= 1");
    w.validate();
    HorizonProblem hp;
    hp.kind = ControllerKind::FT;
    hp.N_p = N_p;
    hp.lambda_u = w.lambda_u;
    hp.lambda_sw = w.lambda_sw;
    hp.filter = fp;
    hp.filter_mats = filter_matrices(fp);

    const AugmentedModelT m = augment_ft(discretize(sys), hp.filter_mats);
    const Prediction pr = build_prediction(m.A, m.B, m.C, m.D, N_p);
    hp.Gamma = pr.Gamma;
    hp.Upsilon = pr.Upsilon;
    hp.Psi = pr.Psi;
    build_pi_e_ft(N_p, hp.Pi, hp.E);

    hp.Q_bar = MatrixXd::Zero(3 * N_p, 3 * N_p);
    for (int s = 0; s < N_p; ++s) {
        hp.Q_bar(3 * s, 3 * s) = 1.0;
        hp.Q_bar(3 * s + 1, 3 * s + 1) = 1.0;
        hp.Q_bar(3 * s + 2, 3 * s + 2) = w.lambda_sw * kFreqScale * kFreqScale;
    }

    // ||P||^2 counts each transition twice (delta_u and p rows), hence lambda_u/2.
    hp.H = hp.Upsilon.transpose() * hp.Q_bar * hp.Upsilon
         + 0.5 * w.lambda_u * hp.Pi.transpose() * hp.Pi;
    finish_assembly(hp);
    return hp;
}

HorizonProblem assemble_fl(const SystemParams& sys, const FilterParams& fp,
                           const CostWeights& w, int N_p, double f_star) {
    if (N_p < 1) throw std::invalid_argument("assemble_fl: N_p must be >= 1");
    if (!(f_star >= 0.0)) throw std::invalid_argument("assemble_fl: f_star must be >= 0");
    w.validate();
    if (!(w.lambda_sw > 0.0))
        throw std::invalid_argument("assemble_fl: lambda_sw must be > 0 (slack rows of H)");
    HorizonProblem hp;
    hp.kind = ControllerKind::FL;
    hp.N_p = N_p;
    hp.lambda_u = w.lambda_u;
    hp.lambda_sw = w.lambda_sw;
    hp.f_star = f_star;
    hp.filter = fp;
    hp.filter_mats = filter_matrices(fp);

    const AugmentedModelS m = augment_fl(discretize(sys));
    const Prediction pr = build_prediction(m.A, m.B, m.C, m.D, N_p);
    hp.Gamma = pr.Gamma;
    hp.Upsilon = pr.Upsilon;
    hp.Psi = pr.Psi;
    build_pi_e_l_fl(N_p, hp.Pi, hp.E, hp.L_slack);

    hp.Q_bar = MatrixXd::Identity(2 * N_p, 2 * N_p);

    hp.H = hp.Upsilon.transpose() * hp.Upsilon
         + w.lambda_sw * hp.L_slack.transpose() * hp.L_slack
         + w.lambda_u * hp.Pi.transpose() * hp.Pi;
    finish_assembly(hp);
    return hp;
}

UnconstrainedPoint linear_term(const HorizonProblem& hp, const VectorXd& x,
                               const Eigen::Vector3d& v_g_abc, const VectorXd& y_ref,
                               const PhaseSwitch& u_prev) {
    if (x.size() != hp.state_dim())
        throw std::invalid_argument("linear_term: state dimension mismatch");
    if (y_ref.size() != hp.output_dim() * hp.N_p)
        throw std::invalid_argument("linear_term: reference dimension mismatch");

    const VectorXd r = hp.Gamma * x + hp.Psi_sum * v_g_abc - y_ref;

    VectorXd u_prev_ext = VectorXd::Zero(hp.kind == ControllerKind::FT ? 6 : 4);
    u_prev_ext.head<3>() = u_prev.as_vector();
    const double pen = hp.kind == ControllerKind::FT ? 0.5 * hp.lambda_u : hp.lambda_u;

    UnconstrainedPoint pt;
    pt.theta = hp.Upsilon.transpose() * (hp.Q_bar * r)
             - pen * hp.Pi.transpose() * (hp.E * u_prev_ext);

    // u_hat = -V H^-1 theta via two triangular solves against V.
    const VectorXd w = solve_lower_transposed(hp.V, pt.theta);
    const VectorXd z = solve_lower(hp.V, w);
    pt.u_unc = -z;
    pt.u_hat = -w;
    return pt;
}

VectorXd reference_stack(const HorizonProblem& hp, const AlphaBetaVector& i_ref,
                         double step_rotation, double f_star) {
    const int q = hp.output_dim();
    VectorXd y = VectorXd::Zero(q * hp.N_p);
    for (int n = 1; n <= hp.N_p; ++n) {
        const double ang = n * step_rotation;
        const double ca = std::cos(ang), sa = std::sin(ang);
        y(q * (n - 1)) = ca * i_ref.alpha - sa * i_ref.beta;
        y(q * (n - 1) + 1) = sa * i_ref.alpha + ca * i_ref.beta;
        if (hp.kind == ControllerKind::FT) y(q * (n - 1) + 2) = f_star;
    }
    return y;
}

double ils_cost(const HorizonProblem& hp, const VectorXd& u_hat, const VectorXd& U) {
    return (u_hat - hp.V * U).squaredNorm();
}

}  // namespace fcs
