#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "precis/matrix.hpp"
#include "precis/rng.hpp"

namespace precis {

// Five-diagonal ground-truth family: rho0 on the diagonal, rho1 at |i-j|=1,
// rho2 at |i-j|=2. The optional perturbation adds one shared uniform
// (-delta, delta) draw to each nonzero off-diagonal pair.
struct ModelSpec {
    enum class Kind { gaussian, subgaussian_uniform };

    struct Perturb {
        double delta = 0.0;
        std::uint64_t seed = 0;
    };

    std::size_t p = 0;
    double rho0 = 0.0, rho1 = 0.0, rho2 = 0.0;
    std::optional<Perturb> perturb;
    Kind kind = Kind::gaussian;
};

struct GroundTruth {
    SymMatrix theta0;
    SymMatrix sigma0;      // theta0^{-1}
    SymMatrix sigma0_sqrt; // symmetric PSD root of sigma0
    std::vector<std::pair<std::size_t, std::size_t>> s0; // ordered nonzero pairs, diagonal included
    std::size_t s = 0;     // max nonzeros in any row of theta0
    SpdFactor sigma0_chol; // cached factor for the Gaussian sampler
};

SymMatrix five_diag(std::size_t p, double rho0, double rho1, double rho2);

// One uniform(-delta, delta) draw per nonzero pair (i,j), i<j, visited in
// row-major order; added to both triangles. Diagonal and zeros untouched.
SymMatrix perturb_offdiag(const SymMatrix& theta, double delta, SeededRng& rng);

// Builds theta0 (redrawing the perturbation up to 50 times if the smallest
// eigenvalue is <= 0.01), inverts it via Cholesky solves, takes the symmetric
// root of sigma0, and extracts the exact-zero support.
GroundTruth build_ground_truth(const ModelSpec& spec);

// Rows are i.i.d. L z with z standard normal, L the Cholesky factor of sigma0.
Matrix sample_gaussian(const GroundTruth& gt, std::size_t n, SeededRng& rng);

// Rows are sigma0_sqrt * u with u entries i.i.d. uniform(-sqrt(3), sqrt(3)),
// giving unit component variance and row covariance sigma0.
Matrix sample_subgaussian_uniform(const GroundTruth& gt, std::size_t n, SeededRng& rng);

// ceil((s * log p)^2) with the natural logarithm.
std::size_t sample_size_rule(std::size_t s, std::size_t p);

// key=value round trip used by the CLI and manifests.
std::string format_model_spec(const ModelSpec& spec);
ModelSpec parse_model_spec(const std::string& text);

} // namespace precis
