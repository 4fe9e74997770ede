#include "vcsra/numerics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "vcsra/errors.hpp"

namespace vcsra::numerics {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) noexcept {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) noexcept {
    std::uint64_t s = a ^ (b * 0xD1B54A32D192ED03ULL);
    return splitmix64(s);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id) {
    std::uint64_t s = mix(master_seed, 0x5EED5EED5EED5EEDULL) ^ mix(stream_id, 0xA5A5A5A5A5A5A5A5ULL);
    for (auto& word : state_) word = splitmix64(s);
    // xoshiro must not start from the all-zero state.
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

RngStream RngStream::split(std::uint64_t tag) const {
    return RngStream(master_seed_, mix(stream_id_, tag + 0x632BE59BD9B4E019ULL));
}

std::uint64_t RngStream::next_u64() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) noexcept {
    // Rejection on the top of the range removes modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

double RngStream::normal() noexcept {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u1;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_normal_ = true;
    return r * std::cos(theta);
}

cdouble RngStream::complex_normal() noexcept {
    constexpr double kScale = std::numbers::sqrt2 / 2.0;
    const double re = normal();
    const double im = normal();
    return {kScale * re, kScale * im};
}

bool is_power_of_two(long n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

OrthogonalCode hadamard(int n) {
    if (!is_power_of_two(n)) {
        throw NonPowerOfTwo("Hadamard order must be a power of two, got " + std::to_string(n));
    }
    Eigen::MatrixXi S(1, 1);
    S(0, 0) = 1;
    while (S.rows() < n) {
        const auto k = S.rows();
        Eigen::MatrixXi next(2 * k, 2 * k);
        next << S, S, S, -S;
        S = std::move(next);
    }
    return OrthogonalCode{std::move(S)};
}

double upper_incomplete_gamma_int(int s, double x) {
    if (s < 1) throw DomainError("incomplete gamma order must be >= 1");
    if (!(x >= 0.0)) throw DomainError("incomplete gamma argument must be >= 0");
    if (x == 0.0) return std::tgamma(static_cast<double>(s));
    if (std::isinf(x)) return 0.0;
    const double log_x = std::log(x);
    const double log_prefactor = std::lgamma(static_cast<double>(s)) - x;
    double sum = 0.0;
    for (int k = 0; k < s; ++k) {
        sum += std::exp(log_prefactor + k * log_x - std::lgamma(k + 1.0));
    }
    return sum;
}

double db_to_linear(double v_db) noexcept { return std::pow(10.0, v_db / 10.0); }

double linear_to_db(double v) {
    if (!(v > 0.0)) throw DomainError("linear_to_db needs a positive value");
    return 10.0 * std::log10(v);
}

ComplexVector sample_complex_gaussian(RngStream& rng, int n) {
    ComplexVector v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
    return v;
}

ComplexMatrix sample_complex_gaussian(RngStream& rng, int n, int cols) {
    ComplexMatrix m(n, cols);
    for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < n; ++r) m(r, c) = rng.complex_normal();
    }
    return m;
}

RealMatrix orthonormal_real_basis(int M, int Q, RngStream& rng) {
    if (M < 1 || Q < 1) throw DimensionError("basis dimensions must be positive");
    if (Q > M) {
        throw DimensionError("cannot build " + std::to_string(Q) + " orthonormal columns in R^" +
                             std::to_string(M));
    }
    RealMatrix G(M, Q);
    for (int c = 0; c < Q; ++c) {
        for (int r = 0; r < M; ++r) G(r, c) = rng.normal();
    }
    Eigen::HouseholderQR<RealMatrix> qr(G);
    return qr.householderQ() * RealMatrix::Identity(M, Q);
}

ComplexMatrix pseudo_inverse_left(const ComplexMatrix& H) {
    if (H.rows() < H.cols()) {
        throw DimensionError("left pseudo-inverse needs rows >= cols");
    }
    const ComplexMatrix gram = H.adjoint() * H;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(hi > 0.0) || !(lo > hi / kMaxCondition)) {
        throw SingularMatrix("Gram matrix is singular or ill-conditioned (eigenvalues " +
                             std::to_string(lo) + " .. " + std::to_string(hi) + ")");
    }
    return gram.ldlt().solve(H.adjoint());
}

}  // namespace vcsra::numerics
