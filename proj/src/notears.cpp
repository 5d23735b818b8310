#include "iris/notears.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace iris {

namespace {

using Matrix = Eigen::MatrixXd;

Matrix to_eigen(const WeightedAdjacency& w) {
    Matrix m(w.d, w.d);
    for (size_t i = 0; i < w.d; ++i)
        for (size_t j = 0; j < w.d; ++j) m(i, j) = w.at(i, j);
    return m;
}

// h(W) and gradient on Eigen matrices.
double h_value(const Matrix& w, Matrix* grad) {
    const Matrix e = (w.array() * w.array()).matrix().exp();
    if (grad) *grad = 2.0 * (e.transpose().array() * w.array()).matrix();
    return e.trace() - static_cast<double>(w.rows());
}

double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

}  // namespace

AcyclicityValue notears_h(const WeightedAdjacency& w) {
    for (double v : w.w)
        if (!std::isfinite(v)) throw InvalidArgument("notears_h: non-finite entry");
    Matrix grad;
    AcyclicityValue out;
    out.value = h_value(to_eigen(w), &grad);
    out.gradient.resize(w.d * w.d);
    for (size_t i = 0; i < w.d; ++i)
        for (size_t j = 0; j < w.d; ++j) out.gradient[i * w.d + j] = grad(i, j);
    return out;
}

NotearsResult run_notears(const NumericMatrix& x, const NotearsConfig& config) {
    const size_t n = x.rows, d = x.cols;
    if (n == 0 || d == 0) throw InvalidArgument("run_notears: empty input");
    if (d < 2) throw InvalidArgument("run_notears: need at least two variables");

    Matrix X(n, d);
    for (size_t r = 0; r < n; ++r)
        for (size_t c = 0; c < d; ++c) X(r, c) = x.at(r, c);
    const Matrix gram = X.transpose() * X / static_cast<double>(n);  // (1/n) X^T X

    Matrix W = Matrix::Zero(d, d);
    double rho = config.rho_init;
    double alpha = 0.0;
    double h = h_value(W, nullptr);

    NotearsResult result;

    // Smooth part of the augmented Lagrangian and its gradient.
    auto smooth = [&](const Matrix& w, Matrix* grad) {
        // loss = (1/2n)||X - XW||_F^2; grad = (1/n) X^T X (W - I)
        const Matrix diff = w - Matrix::Identity(d, d);
        const Matrix gd = gram * diff;
        const double loss = 0.5 * (diff.transpose() * gd).trace();
        Matrix hg;
        const double hv = h_value(w, grad ? &hg : nullptr);
        if (grad) {
            *grad = gd + (alpha + rho * hv) * hg;
            grad->diagonal().setZero();
        }
        return loss + 0.5 * rho * hv * hv + alpha * hv;
    };

    for (int outer = 0; outer < config.max_outer; ++outer) {
        const double h_prev = h;
        // Inner proximal-gradient loop with backtracking.
        double step = 1.0;
        Matrix grad;
        double f = smooth(W, &grad);
        for (int inner = 0; inner < config.max_inner; ++inner) {
            Matrix W_new(d, d);
            double f_new = 0.0;
            bool accepted = false;
            for (int bt = 0; bt < 60; ++bt) {
                for (size_t i = 0; i < d; ++i)
                    for (size_t j = 0; j < d; ++j)
                        W_new(i, j) = i == j ? 0.0
                                             : soft_threshold(W(i, j) - step * grad(i, j),
                                                              step * config.lambda1);
                Matrix grad_new;
                f_new = smooth(W_new, &grad_new);
                // quadratic upper-bound check for the proximal step
                const Matrix delta = W_new - W;
                const double bound = f + (grad.array() * delta.array()).sum() +
                                     delta.squaredNorm() / (2.0 * step);
                if (f_new <= bound + 1e-12) {
                    grad = std::move(grad_new);
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) break;
            const double move = (W_new - W).lpNorm<Eigen::Infinity>();
            W = std::move(W_new);
            f = f_new;
            step = std::min(step * 2.0, 1.0);
            if (move < 1e-8) break;
        }

        h = h_value(W, nullptr);
        result.trajectory.push_back({rho, alpha, h});
        if (h <= config.h_tolerance) {
            result.converged = true;
            break;
        }
        if (h > 0.25 * h_prev) rho *= config.rho_growth;
        alpha += rho * h;
        if (rho > 1e16) break;  // numerically stuck
    }

    result.final_h = h;
    result.weights.d = d;
    result.weights.names = x.col_names;
    result.weights.w.assign(d * d, 0.0);
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) result.weights.w[i * d + j] = W(i, j);

    for (const auto& name : x.col_names) result.graph.add_node(name);
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j)
            if (i != j && std::fabs(W(i, j)) > config.edge_threshold)
                result.graph.add_edge(x.col_names[i], x.col_names[j], EdgeMark::Directed);
    return result;
}

}  // namespace iris
