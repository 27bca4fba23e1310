#include "dqteleop/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dqteleop {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string_view to_string(QpStatus status)
{
    switch (status) {
    case QpStatus::optimal:
        return "optimal";
    case QpStatus::infeasible:
        return "infeasible";
    case QpStatus::max_iter:
        return "max_iter";
    }
    return "unknown";
}

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
// Relative size below which the step direction is considered zero, i.e. the
// new constraint normal lies in the span of the active normals.
constexpr double dependence_tol = 1e-11;
constexpr double violation_tol = 1e-12;

void validate(const QpProblem& p)
{
    const Index n = p.H.rows();
    if (p.H.cols() != n || p.f.size() != n) {
        throw std::invalid_argument("QP: H must be N x N and f an N-vector");
    }
    if (p.W.rows() != p.w.size() || (p.W.rows() > 0 && p.W.cols() != n)) {
        throw std::invalid_argument("QP: W must be r x N and w an r-vector");
    }
    const double scale = std::max(1.0, p.H.cwiseAbs().maxCoeff());
    if (n > 0 && (p.H - p.H.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw std::invalid_argument("QP: H is not symmetric");
    }
}

// Step direction z and dual direction r for adding normal np given the active normals.
struct Directions {
    VectorXd z;
    VectorXd r;
    bool dependent = false;
};

class ActiveSetFactor {
public:
    explicit ActiveSetFactor(const Eigen::LLT<MatrixXd>& llt) : llt_(llt) {}

    Directions directions(const MatrixXd& W, const std::vector<Index>& active, Index p) const
    {
        const Index n = W.cols();
        const auto q = static_cast<Index>(active.size());
        const auto L = llt_.matrixL();
        const VectorXd np = -W.row(p).transpose();
        const VectorXd y = L.solve(np);

        Directions out;
        if (q == 0) {
            out.z = llt_.matrixU().solve(y);
            out.r.resize(0);
            out.dependent = y.norm() <= dependence_tol * std::max(1.0, np.norm());
            return out;
        }
        MatrixXd B(n, q);
        for (Index j = 0; j < q; ++j) {
            B.col(j) = -W.row(active[static_cast<std::size_t>(j)]).transpose();
        }
        B = L.solve(B);
        const Eigen::HouseholderQR<MatrixXd> qr(B);
        const VectorXd d = qr.householderQ().transpose() * y;
        const MatrixXd R = qr.matrixQR().topLeftCorner(q, q).triangularView<Eigen::Upper>();
        out.r = R.triangularView<Eigen::Upper>().solve(d.head(q));
        VectorXd d2 = VectorXd::Zero(n);
        d2.tail(n - q) = d.tail(n - q);
        out.dependent = d2.norm() <= dependence_tol * std::max(y.norm(), std::numeric_limits<double>::min());
        if (out.dependent) {
            out.z = VectorXd::Zero(n);
        } else {
            out.z = llt_.matrixU().solve(qr.householderQ() * d2);
        }
        return out;
    }

private:
    const Eigen::LLT<MatrixXd>& llt_;
};

double slack(const QpProblem& p, const VectorXd& x, Index i) { return p.w(i) - p.W.row(i).dot(x); }

double tolerance(const QpProblem& p, const VectorXd& x, Index i)
{
    return violation_tol * (1.0 + std::abs(p.w(i)) + p.W.row(i).cwiseAbs().maxCoeff() * x.cwiseAbs().maxCoeff());
}

}  // namespace

double kkt_residual(const QpProblem& problem, const VectorXd& x, const VectorXd& multipliers)
{
    double res = (problem.H * x + problem.f + problem.W.transpose() * multipliers).cwiseAbs().maxCoeff();
    if (problem.W.rows() > 0) {
        const VectorXd viol = problem.W * x - problem.w;
        res = std::max(res, viol.maxCoeff());
        res = std::max(res, (multipliers.array() * viol.array()).abs().maxCoeff());
        res = std::max(res, -multipliers.minCoeff());
    }
    return std::max(res, 0.0);
}

QpSolution QpSolver::solve(const QpProblem& problem)
{
    validate(problem);
    const Index n = problem.H.rows();
    const Index m = problem.W.rows();

    QpSolution sol;
    sol.multipliers = VectorXd::Zero(m);

    Eigen::LLT<MatrixXd> llt(problem.H);
    if (llt.info() != Eigen::Success) {
        const double ridge = 1e-10 * problem.H.trace() / static_cast<double>(std::max<Index>(n, 1));
        llt.compute(problem.H + std::max(ridge, std::numeric_limits<double>::min()) * MatrixXd::Identity(n, n));
        sol.ridge_applied = true;
        if (llt.info() != Eigen::Success) {
            throw std::domain_error("QP: H is not positive definite even after the ridge");
        }
    }
    const ActiveSetFactor factor(llt);

    VectorXd x = -llt.solve(problem.f);
    std::vector<Index> active;
    VectorXd u(0);
    std::vector<char> is_active(static_cast<std::size_t>(m), 0);
    std::vector<char> preferred(static_cast<std::size_t>(m), 0);
    if (warm_start_) {
        for (const Index i : previous_active_) {
            if (i < m) {
                preferred[static_cast<std::size_t>(i)] = 1;
            }
        }
    }

    const int max_iterations = static_cast<int>(20 * (n + m) + 50);
    int iterations = 0;
    sol.status = QpStatus::optimal;

    while (true) {
        // Most violated constraint, previously active rows first.
        Index p = -1;
        double worst = 0.0;
        bool worst_preferred = false;
        for (Index i = 0; i < m; ++i) {
            if (is_active[static_cast<std::size_t>(i)]) {
                continue;
            }
            const double s = slack(problem, x, i);
            if (s >= -tolerance(problem, x, i)) {
                continue;
            }
            const bool pref = preferred[static_cast<std::size_t>(i)] != 0;
            if (p < 0 || (pref && !worst_preferred) || (pref == worst_preferred && s < worst)) {
                p = i;
                worst = s;
                worst_preferred = pref;
            }
        }
        if (p < 0) {
            break;
        }

        double u_p = 0.0;
        bool added = false;
        while (!added) {
            if (++iterations > max_iterations) {
                sol.status = QpStatus::max_iter;
                break;
            }
            const Directions dir = factor.directions(problem.W, active, p);

            // Partial (dual) step limit.
            double t1 = inf;
            Index drop = -1;
            for (Index j = 0; j < dir.r.size(); ++j) {
                if (dir.r(j) > 0.0) {
                    const double ratio = u(j) / dir.r(j);
                    if (ratio < t1) {
                        t1 = ratio;
                        drop = j;
                    }
                }
            }
            // Full (primal) step.
            double t2 = inf;
            if (!dir.dependent) {
                const double zn = -problem.W.row(p).dot(dir.z);
                if (zn > 0.0) {
                    t2 = -slack(problem, x, p) / zn;
                }
            }

            if (t1 == inf && t2 == inf) {
                sol.status = QpStatus::infeasible;
                // -W_p = sum_j r_j (-W_j) with r <= 0.
                sol.farkas = VectorXd::Zero(m);
                sol.farkas(p) = 1.0;
                for (Index j = 0; j < dir.r.size(); ++j) {
                    sol.farkas(active[static_cast<std::size_t>(j)]) = std::max(0.0, -dir.r(j));
                }
                break;
            }

            const double t = std::min(t1, t2);
            if (t2 < inf) {
                x += t * dir.z;
            }
            if (u.size() > 0) {
                u -= t * dir.r;
            }
            u_p += t;

            if (t2 <= t1) {
                active.push_back(p);
                is_active[static_cast<std::size_t>(p)] = 1;
                u.conservativeResize(u.size() + 1);
                u(u.size() - 1) = u_p;
                added = true;
            } else {
                is_active[static_cast<std::size_t>(active[static_cast<std::size_t>(drop)])] = 0;
                active.erase(active.begin() + drop);
                VectorXd shrunk(u.size() - 1);
                shrunk << u.head(drop), u.tail(u.size() - drop - 1);
                u = shrunk;
            }
        }
        if (sol.status != QpStatus::optimal) {
            break;
        }
    }

    for (std::size_t j = 0; j < active.size(); ++j) {
        sol.multipliers(active[j]) = std::max(0.0, u(static_cast<Index>(j)));
    }
    sol.x = x;
    sol.iterations = iterations;
    sol.active_set = active;
    sol.kkt_residual = kkt_residual(problem, x, sol.multipliers);
    if (sol.status == QpStatus::optimal) {
        previous_active_ = active;
    }
    return sol;
}

QpSolution solve_qp(const QpProblem& problem)
{
    QpSolver solver;
    solver.set_warm_start(false);
    return solver.solve(problem);
}

FeasibilityResult is_feasible(const MatrixXd& W, const VectorXd& w)
{
    FeasibilityResult out;
    const Index n = W.cols();
    if (W.rows() == 0) {
        out.witness = VectorXd::Zero(n);
        return out;
    }
    // Minimum-norm point of the polyhedron; the dual method certifies emptiness.
    const QpProblem p{MatrixXd::Identity(n, n), VectorXd::Zero(n), W, w};
    const QpSolution sol = solve_qp(p);
    out.witness = sol.x;
    out.max_violation = (W * sol.x - w).maxCoeff();
    if (sol.status == QpStatus::infeasible) {
        out.feasible = false;
        out.certificate = sol.farkas;
    } else {
        out.feasible = out.max_violation <= 1e-9 * (1.0 + w.cwiseAbs().maxCoeff());
    }
    return out;
}

}  // namespace dqteleop
