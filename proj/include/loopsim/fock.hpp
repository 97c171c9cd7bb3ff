#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace loopsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Truncated Fock-basis density matrix for one or two modes.
/// Convention: hbar = 1, vacuum quadrature variance 1/2,
/// x = (a + a†)/sqrt(2), p = (a - a†)/(i sqrt(2)).
struct FockState {
    std::vector<int> dims;
    Matrix rho;
    /// Set when an operation pushed noticeable population into the top
    /// Fock levels (see tail_population).
    bool cutoff_warning = false;

    int total_dim() const;
    int n_modes() const { return static_cast<int>(dims.size()); }
    double trace() const { return rho.trace().real(); }
};

/// Population threshold in the top two Fock levels above which operations
/// flag cutoff_warning.
inline constexpr double kTailThreshold = 1e-4;

// --- construction ---------------------------------------------------------

Matrix annihilation(int dim);

FockState make_vacuum(int n_modes, int cutoff);

/// Pure squeezed vacuum S(r)|0>, Var(x) = e^{-2r}/2 for r > 0.
FockState make_squeezed_vacuum(double r, int cutoff);

FockState make_fock(int n, int cutoff);

// --- channels -------------------------------------------------------------

/// Pure-loss channel with transmissivity eta on one mode.
FockState apply_loss(const FockState& state, int mode, double eta);

/// Two-mode beam splitter with reflectivity R. Heisenberg convention:
///   x1 -> sqrt(R) x1 + sqrt(T) x2,   x2 -> sqrt(T) x1 - sqrt(R) x2
/// (same for p), T = 1 - R.
FockState apply_beamsplitter(const FockState& state, double reflectivity);

/// Displace <x> by dx and <p> by dp on one mode.
FockState displace(const FockState& state, int mode, double dx, double dp);

/// Phase-space rotation by angle theta on one mode (x_out = x cos - p sin).
FockState rotate(const FockState& state, int mode, double theta);

// --- measurements & metrics ------------------------------------------------

/// Wigner function via the displaced-parity formula,
/// W(x,p) = (1/pi) Tr[rho D(x,p) P D†(x,p)], normalized so that the
/// integral over phase space is 1 and the vacuum peak is 1/pi.
double wigner(const FockState& state, double x, double p);

/// Jozsa fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const FockState& rho, const FockState& sigma);

FockState partial_trace(const FockState& state, int keep_mode);
FockState tensor(const FockState& a, const FockState& b);

/// Quadrature probability density p(x | phi) of a single-mode state.
double quadrature_pdf(const FockState& state, double phi, double x);

/// Mean and variance of the rotated quadrature x_phi = x cos(phi) + p sin(phi).
double mean_quadrature(const FockState& state, double phi);
double var_quadrature(const FockState& state, double phi);

/// Population in the top two Fock levels of one mode.
double tail_population(const FockState& state, int mode);

/// Sum_n (-1)^n rho_nn; equals pi * W(0,0) for a single mode.
double parity_expectation(const FockState& state);

// --- internals shared with the gate engine ---------------------------------

/// Unnormalized conditional state after projecting mode `measured` of a
/// two-mode state onto the quadrature eigenstate |m>_phi. The trace of the
/// result is the probability density of outcome m.
FockState condition_on_quadrature(const FockState& state, int measured,
                                  double phi, double m);

/// Harmonic-oscillator eigenfunctions psi_0..psi_{nmax-1} at x (hbar = 1).
Eigen::VectorXd hermite_functions(int nmax, double x);

/// Displacement matrix D(alpha) with alpha = (dx + i dp)/sqrt(2), exactly
/// unitary on the truncated space.
Matrix displacement_matrix(int dim, double dx, double dp);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace loopsim
