#pragma once

#include <array>
#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace vcsra {

using cdouble = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

namespace numerics {

/// Deterministic random stream addressed by (master_seed, stream_id).
///
/// The generator is xoshiro256** seeded through splitmix64, and every draw
/// (uniform, Gaussian) is produced by code in this file, so a given address
/// yields the same sequence on every platform and standard library. Streams
/// with distinct ids are seeded from well-separated splitmix64 outputs and are
/// treated as independent.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    /// Child stream for a sub-task. Deterministic in (master_seed, stream_id, tag)
    /// and independent of how far this stream has advanced.
    RngStream split(std::uint64_t tag) const;

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    /// Uniform integer on [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n) noexcept;
    /// Standard normal (Box-Muller, second variate cached).
    double normal() noexcept;
    /// Circularly symmetric CN(0, 1): real and imaginary parts each N(0, 1/2).
    cdouble complex_normal() noexcept;

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::array<std::uint64_t, 4> state_{};
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

/// Sylvester Hadamard code, entries in {+1, -1}.
struct OrthogonalCode {
    Eigen::MatrixXi matrix;

    int length() const noexcept { return static_cast<int>(matrix.rows()); }
    /// Column i as a real vector (the i-th virtual-carrier code s_i).
    RealVector column(int i) const { return matrix.col(i).cast<double>(); }
};

/// Sylvester-construction Hadamard matrix of order n. Throws NonPowerOfTwo.
OrthogonalCode hadamard(int n);

bool is_power_of_two(long n) noexcept;

/// Gamma(s, x) for integer s >= 1 via (s-1)! e^{-x} sum_{k<s} x^k / k!,
/// summed in log space so large x underflows gracefully.
double upper_incomplete_gamma_int(int s, double x);

double db_to_linear(double v_db) noexcept;
/// Throws DomainError for v <= 0.
double linear_to_db(double v);

ComplexVector sample_complex_gaussian(RngStream& rng, int n);
/// n x cols matrix of i.i.d. CN(0, 1) entries, filled column by column.
ComplexMatrix sample_complex_gaussian(RngStream& rng, int n, int cols);

/// M x Q real matrix with orthonormal columns, from a Householder QR of a
/// seeded real Gaussian matrix. Throws DimensionError if Q > M.
RealMatrix orthonormal_real_basis(int M, int Q, RngStream& rng);

/// Relative condition-number ceiling applied to Gram matrices before inversion.
inline constexpr double kMaxCondition = 1e12;

/// Left pseudo-inverse (H^H H)^{-1} H^H of a tall full-column-rank matrix.
/// Throws DimensionError when rows < cols and SingularMatrix when cond(H^H H)
/// exceeds kMaxCondition.
ComplexMatrix pseudo_inverse_left(const ComplexMatrix& H);

}  // namespace numerics
}  // namespace vcsra
