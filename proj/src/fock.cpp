#include "loopsim/fock.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace loopsim {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Cached eigendecomposition of i(a† - a) used by displacement_matrix.
struct DispBasis {
    Eigen::VectorXd eigenvalues;
    Matrix eigenvectors;
};

const DispBasis& displacement_basis(int dim) {
    static std::mutex mtx;
    static std::map<int, DispBasis> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(dim);
    if (it != cache.end()) return it->second;
    Matrix a = annihilation(dim);
    Matrix h = Complex(0, 1) * (a.adjoint() - a);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    DispBasis basis{es.eigenvalues(), es.eigenvectors()};
    return cache.emplace(dim, std::move(basis)).first->second;
}

void flag_tail(FockState& s) {
    for (int m = 0; m < s.n_modes(); ++m) {
        if (tail_population(s, m) > kTailThreshold) {
            s.cutoff_warning = true;
            return;
        }
    }
}

}  // namespace

int FockState::total_dim() const {
    int d = 1;
    for (int x : dims) d *= x;
    return d;
}

Matrix annihilation(int dim) {
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

FockState make_vacuum(int n_modes, int cutoff) {
    require(cutoff >= 2, "make_vacuum: cutoff must be >= 2");
    require(n_modes == 1 || n_modes == 2, "make_vacuum: 1 or 2 modes");
    FockState s;
    s.dims.assign(n_modes, cutoff);
    s.rho = Matrix::Zero(s.total_dim(), s.total_dim());
    s.rho(0, 0) = 1.0;
    return s;
}

FockState make_fock(int n, int cutoff) {
    require(n >= 0 && n < cutoff, "make_fock: n out of range");
    FockState s;
    s.dims = {cutoff};
    s.rho = Matrix::Zero(cutoff, cutoff);
    s.rho(n, n) = 1.0;
    return s;
}

FockState make_squeezed_vacuum(double r, int cutoff) {
    require(cutoff >= 2, "make_squeezed_vacuum: cutoff must be >= 2");
    // S(r)|0> = (1/sqrt(cosh r)) sum_n (-tanh r)^n sqrt((2n)!)/(2^n n!) |2n>
    Vector v = Vector::Zero(cutoff);
    double th = std::tanh(r);
    double amp = 1.0 / std::sqrt(std::cosh(r));
    v(0) = amp;
    // ratio between consecutive even amplitudes: c_{2n+2}/c_{2n} = -th * sqrt((2n+1)(2n+2))/(2(n+1))
    for (int n = 0; 2 * n + 2 < cutoff; ++n) {
        amp *= -th * std::sqrt(double(2 * n + 1) * double(2 * n + 2)) / (2.0 * (n + 1));
        v(2 * n + 2) = amp;
    }
    v.normalize();
    FockState s;
    s.dims = {cutoff};
    s.rho = v * v.adjoint();
    flag_tail(s);
    return s;
}

FockState apply_loss(const FockState& state, int mode, double eta) {
    require(eta >= 0.0 && eta <= 1.0, "apply_loss: eta must lie in [0, 1]");
    require(mode >= 0 && mode < state.n_modes(), "apply_loss: bad mode index");
    if (eta == 1.0) return state;
    int d = state.dims[mode];
    // Kraus operators A_k|n> = sqrt(C(n,k) eta^{n-k} (1-eta)^k) |n-k>
    std::vector<Matrix> kraus;
    kraus.reserve(d);
    for (int k = 0; k < d; ++k) {
        Matrix A = Matrix::Zero(d, d);
        for (int n = k; n < d; ++n) {
            double logc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
            A(n - k, n) = std::sqrt(std::exp(logc) * std::pow(eta, n - k) * std::pow(1 - eta, k));
        }
        kraus.push_back(std::move(A));
    }
    FockState out = state;
    if (state.n_modes() == 1) {
        out.rho.setZero();
        for (const auto& A : kraus) out.rho += A * state.rho * A.adjoint();
    } else {
        int do_ = state.dims[1 - mode];
        Matrix full = Matrix::Zero(state.total_dim(), state.total_dim());
        Matrix eye = Matrix::Identity(do_, do_);
        for (const auto& A : kraus) {
            Matrix K(state.total_dim(), state.total_dim());
            if (mode == 0) {
                K = Eigen::kroneckerProduct(A, eye).eval();
            } else {
                K = Eigen::kroneckerProduct(eye, A).eval();
            }
            full += K * state.rho * K.adjoint();
        }
        out.rho = full;
    }
    flag_tail(out);
    return out;
}

FockState apply_beamsplitter(const FockState& state, double reflectivity) {
    require(state.n_modes() == 2, "apply_beamsplitter: two-mode state required");
    require(reflectivity >= 0.0 && reflectivity <= 1.0, "apply_beamsplitter: R in [0, 1]");
    int d1 = state.dims[0], d2 = state.dims[1];
    double theta = std::atan2(std::sqrt(1.0 - reflectivity), std::sqrt(reflectivity));

    // U = P2 exp(theta (a1† a2 - a2† a1)); the generator conserves total photon
    // number, so exponentiate per number block.
    int D = d1 * d2;
    Matrix U = Matrix::Zero(D, D);
    for (int N = 0; N <= d1 + d2 - 2; ++N) {
        int lo = std::max(0, N - (d2 - 1));
        int hi = std::min(N, d1 - 1);
        int sz = hi - lo + 1;
        if (sz <= 0) continue;
        // block basis: n1 = lo..hi, n2 = N - n1
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(sz, sz);
        for (int i = 0; i + 1 < sz; ++i) {
            int n1 = lo + i;
            int n2 = N - n1;
            // <n1+1, n2-1| a1† a2 |n1, n2>
            double c = std::sqrt(double(n1 + 1) * double(n2));
            g(i + 1, i) = theta * c;
            g(i, i + 1) = -theta * c;
        }
        // exp of real antisymmetric g via eigensolve of the Hermitian i*g
        Matrix h = Complex(0, 1) * g.cast<Complex>();
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        Vector ph(sz);
        for (int i = 0; i < sz; ++i)
            ph(i) = std::exp(Complex(0, -es.eigenvalues()(i)));
        Matrix blk = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
        for (int i = 0; i < sz; ++i) {
            int row = (lo + i) * d2 + (N - lo - i);
            double par = ((N - lo - i) % 2 == 0) ? 1.0 : -1.0;  // parity on mode 2
            for (int j = 0; j < sz; ++j) {
                int col = (lo + j) * d2 + (N - lo - j);
                U(row, col) = par * blk(i, j);
            }
        }
    }
    FockState out = state;
    out.rho = U * state.rho * U.adjoint();
    flag_tail(out);
    return out;
}

Matrix displacement_matrix(int dim, double dx, double dp) {
    Complex alpha(dx / std::sqrt(2.0), dp / std::sqrt(2.0));
    double mag = std::abs(alpha);
    double arg = std::arg(alpha);
    const DispBasis& basis = displacement_basis(dim);
    Vector ph(dim);
    for (int i = 0; i < dim; ++i)
        ph(i) = std::exp(Complex(0, -mag * basis.eigenvalues(i)));
    Matrix core = basis.eigenvectors * ph.asDiagonal() * basis.eigenvectors.adjoint();
    // D(alpha) = R(arg) exp(|alpha| (a† - a)) R(arg)†, R = exp(i arg n)
    Vector rot(dim);
    for (int n = 0; n < dim; ++n) rot(n) = std::exp(Complex(0, arg * n));
    return rot.asDiagonal() * core * rot.conjugate().asDiagonal();
}

FockState displace(const FockState& state, int mode, double dx, double dp) {
    require(std::isfinite(dx) && std::isfinite(dp), "displace: non-finite displacement");
    require(mode >= 0 && mode < state.n_modes(), "displace: bad mode index");
    Matrix D = displacement_matrix(state.dims[mode], dx, dp);
    FockState out = state;
    if (state.n_modes() == 1) {
        out.rho = D * state.rho * D.adjoint();
    } else {
        Matrix eye = Matrix::Identity(state.dims[1 - mode], state.dims[1 - mode]);
        Matrix full = (mode == 0) ? Eigen::kroneckerProduct(D, eye).eval()
                                  : Eigen::kroneckerProduct(eye, D).eval();
        out.rho = full * state.rho * full.adjoint();
    }
    flag_tail(out);
    return out;
}

FockState rotate(const FockState& state, int mode, double theta) {
    require(mode >= 0 && mode < state.n_modes(), "rotate: bad mode index");
    int d = state.dims[mode];
    Vector ph(d);
    for (int n = 0; n < d; ++n) ph(n) = std::exp(Complex(0, theta * n));
    FockState out = state;
    if (state.n_modes() == 1) {
        out.rho = ph.asDiagonal() * state.rho * ph.conjugate().asDiagonal();
    } else {
        Vector full(state.total_dim());
        int d2 = state.dims[1];
        for (int i = 0; i < state.dims[0]; ++i)
            for (int j = 0; j < d2; ++j)
                full(i * d2 + j) = (mode == 0) ? ph(i) : ph(j);
        out.rho = full.asDiagonal() * state.rho * full.conjugate().asDiagonal();
    }
    return out;
}

double wigner(const FockState& state, double x, double p) {
    require(state.n_modes() == 1, "wigner: single-mode state required");
    int d = state.dims[0];
    Matrix D = displacement_matrix(d, x, p);
    Matrix m = D.adjoint() * state.rho * D;
    double sum = 0.0;
    for (int n = 0; n < d; ++n) sum += ((n % 2 == 0) ? 1.0 : -1.0) * m(n, n).real();
    return sum / kPi;
}

double fidelity(const FockState& rho, const FockState& sigma) {
    require(rho.dims == sigma.dims, "fidelity: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.rho);
    const double eig_floor = -1e-9;
    Eigen::VectorXd ev = es.eigenvalues();
    for (int i = 0; i < ev.size(); ++i) {
        if (ev(i) < eig_floor) throw std::invalid_argument("fidelity: state not PSD");
        if (ev(i) < 0) ev(i) = 0;
    }
    Matrix sq = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    Matrix inner = sq * sigma.rho * sq;
    Eigen::SelfAdjointEigenSolver<Matrix> es2(inner);
    double f = 0.0;
    for (int i = 0; i < es2.eigenvalues().size(); ++i)
        f += std::sqrt(std::max(0.0, es2.eigenvalues()(i)));
    return f * f;
}

FockState partial_trace(const FockState& state, int keep_mode) {
    require(state.n_modes() == 2, "partial_trace: two-mode state required");
    require(keep_mode == 0 || keep_mode == 1, "partial_trace: bad mode");
    int d1 = state.dims[0], d2 = state.dims[1];
    int dk = state.dims[keep_mode];
    FockState out;
    out.dims = {dk};
    out.rho = Matrix::Zero(dk, dk);
    if (keep_mode == 0) {
        for (int i = 0; i < d1; ++i)
            for (int j = 0; j < d1; ++j)
                for (int k = 0; k < d2; ++k)
                    out.rho(i, j) += state.rho(i * d2 + k, j * d2 + k);
    } else {
        for (int i = 0; i < d2; ++i)
            for (int j = 0; j < d2; ++j)
                for (int k = 0; k < d1; ++k)
                    out.rho(i, j) += state.rho(k * d2 + i, k * d2 + j);
    }
    return out;
}

FockState tensor(const FockState& a, const FockState& b) {
    require(a.n_modes() == 1 && b.n_modes() == 1, "tensor: single-mode factors required");
    FockState out;
    out.dims = {a.dims[0], b.dims[0]};
    out.rho = Eigen::kroneckerProduct(a.rho, b.rho);
    out.cutoff_warning = a.cutoff_warning || b.cutoff_warning;
    return out;
}

Eigen::VectorXd hermite_functions(int nmax, double x) {
    Eigen::VectorXd psi(nmax);
    psi(0) = std::pow(kPi, -0.25) * std::exp(-x * x / 2.0);
    if (nmax > 1) psi(1) = std::sqrt(2.0) * x * psi(0);
    for (int n = 2; n < nmax; ++n)
        psi(n) = std::sqrt(2.0 / n) * x * psi(n - 1) - std::sqrt((n - 1.0) / n) * psi(n - 2);
    return psi;
}

double quadrature_pdf(const FockState& state, double phi, double x) {
    require(state.n_modes() == 1, "quadrature_pdf: single-mode state required");
    int d = state.dims[0];
    Eigen::VectorXd psi = hermite_functions(d, x);
    Vector c(d);
    for (int n = 0; n < d; ++n) c(n) = psi(n) * std::exp(Complex(0, n * phi));
    return std::max(0.0, (c.adjoint() * state.rho * c)(0, 0).real());
}

double mean_quadrature(const FockState& state, double phi) {
    require(state.n_modes() == 1, "mean_quadrature: single-mode state required");
    Matrix a = annihilation(state.dims[0]);
    Matrix q = (a * std::exp(Complex(0, -phi)) + a.adjoint() * std::exp(Complex(0, phi))) /
               std::sqrt(2.0);
    return (state.rho * q).trace().real();
}

double var_quadrature(const FockState& state, double phi) {
    require(state.n_modes() == 1, "var_quadrature: single-mode state required");
    Matrix a = annihilation(state.dims[0]);
    Matrix q = (a * std::exp(Complex(0, -phi)) + a.adjoint() * std::exp(Complex(0, phi))) /
               std::sqrt(2.0);
    double m1 = (state.rho * q).trace().real();
    double m2 = (state.rho * q * q).trace().real();
    return m2 - m1 * m1;
}

double tail_population(const FockState& state, int mode) {
    int d = state.dims[mode];
    if (state.n_modes() == 1) {
        return state.rho(d - 1, d - 1).real() + state.rho(d - 2, d - 2).real();
    }
    FockState marg = partial_trace(state, mode);
    return marg.rho(d - 1, d - 1).real() + marg.rho(d - 2, d - 2).real();
}

double parity_expectation(const FockState& state) {
    require(state.n_modes() == 1, "parity_expectation: single-mode state required");
    double sum = 0.0;
    for (int n = 0; n < state.dims[0]; ++n)
        sum += ((n % 2 == 0) ? 1.0 : -1.0) * state.rho(n, n).real();
    return sum;
}

FockState condition_on_quadrature(const FockState& state, int measured, double phi, double m) {
    require(state.n_modes() == 2, "condition_on_quadrature: two-mode state required");
    require(measured == 0 || measured == 1, "condition_on_quadrature: bad mode");
    int d1 = state.dims[0], d2 = state.dims[1];
    int dm = state.dims[measured];
    int dk = state.dims[1 - measured];
    Eigen::VectorXd psi = hermite_functions(dm, m);
    Vector c(dm);
    for (int n = 0; n < dm; ++n) c(n) = psi(n) * std::exp(Complex(0, n * phi));
    FockState out;
    out.dims = {dk};
    out.rho = Matrix::Zero(dk, dk);
    if (measured == 1) {
        // rho_c[i,j] = sum_{k,l} rho[(i,k),(j,l)] conj(c_k) c_l
        for (int i = 0; i < d1; ++i) {
            for (int j = 0; j < d1; ++j) {
                Complex v = 0;
                for (int k = 0; k < d2; ++k) {
                    Complex acc = 0;
                    for (int l = 0; l < d2; ++l) acc += state.rho(i * d2 + k, j * d2 + l) * c(l);
                    v += std::conj(c(k)) * acc;
                }
                out.rho(i, j) = v;
            }
        }
    } else {
        for (int i = 0; i < d2; ++i) {
            for (int j = 0; j < d2; ++j) {
                Complex v = 0;
                for (int k = 0; k < d1; ++k) {
                    Complex acc = 0;
                    for (int l = 0; l < d1; ++l) acc += state.rho(k * d2 + i, l * d2 + j) * c(l);
                    v += std::conj(c(k)) * acc;
                }
                out.rho(i, j) = v;
            }
        }
    }
    return out;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    // Golub-Welsch on the Jacobi matrix of Legendre polynomials.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        double b = i / std::sqrt(4.0 * i * i - 1.0);
        J(i, i - 1) = b;
        J(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        nodes[i] = es.eigenvalues()(i);
        double v0 = es.eigenvectors()(0, i);
        weights[i] = 2.0 * v0 * v0;
    }
}

}  // namespace loopsim
