#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "vcsra/numerics.hpp"

namespace vcsra::channel {

enum class ModelKind { Practical, Simplified };

/// Per-UE correlated ULA model: every UE has its own azimuth and its own set
/// of Q path angles spread around it. Angles are in degrees.
struct PracticalChannelParams {
    int antennas = 100;
    int paths = 50;
    double spacing = 0.5;  ///< antenna spacing in wavelengths
    double azimuth_min_deg = -60.0;
    double azimuth_max_deg = 60.0;
    double spread_deg = 20.0;

    /// Throws ValidationError. Path angles are never wrapped, so the widest
    /// reachable interval [min - spread/2, max + spread/2] must stay inside
    /// [-180, 180].
    void validate() const;
};

/// Shared-correlation model h = sqrt(M/Q) * Abar * v, with one real
/// orthonormal Abar (M x Q) per scenario.
struct SimplifiedChannelParams {
    int antennas = 100;
    int paths = 50;
    std::uint64_t basis_seed = 0;

    void validate() const;
};

using ChannelParams = std::variant<PracticalChannelParams, SimplifiedChannelParams>;

struct CovarianceTraces {
    double tr_phi;
    double tr_phi2;
};

/// (tr Phi, tr Phi^2) = (M, M^2/Q) for the simplified model. The practical
/// model has no single Phi, so it throws ModelMismatch.
CovarianceTraces covariance_traces(const ChannelParams& params);

/// ULA response with the 1/sqrt(Q) path normalisation; entry m is
/// exp(-j 2 pi omega m cos(phi)) / sqrt(Q).
ComplexVector steering_vector(int M, double omega, double phi_deg, int Q);

/// One practical-model UE: azimuth, its Q path angles and the fading vector.
struct PracticalUe {
    double azimuth_deg = 0.0;
    std::vector<double> path_angles_deg;
    ComplexVector fading;
};

PracticalUe draw_practical_ue(const PracticalChannelParams& params, numerics::RngStream& rng);
/// A_u = [a(phi_1), ..., a(phi_Q)] for the UE's path angles.
ComplexMatrix mixing_matrix(const PracticalChannelParams& params, const PracticalUe& ue);
/// A_u v_u evaluated without materialising A_u.
ComplexVector synthesize(const PracticalChannelParams& params, const PracticalUe& ue);
/// tr(A_u A_u^H)^2 for one UE, through the Q x Q Gram of its steering vectors.
double practical_tr_phi2(const PracticalChannelParams& params, const PracticalUe& ue);

/// Columns for n_ues independent UEs of the practical model.
ComplexMatrix draw_practical_channel(const PracticalChannelParams& params, int n_ues,
                                     numerics::RngStream& rng);

class SimplifiedChannelModel {
public:
    explicit SimplifiedChannelModel(const SimplifiedChannelParams& params);

    const SimplifiedChannelParams& params() const noexcept { return params_; }
    /// Orthonormal Abar (M x Q), fixed by basis_seed.
    const RealMatrix& basis() const noexcept { return basis_; }
    /// A = sqrt(M/Q) * Abar.
    RealMatrix mixing_matrix() const { return scale_ * basis_; }

    ComplexMatrix draw(int n_ues, numerics::RngStream& rng) const;

private:
    SimplifiedChannelParams params_;
    RealMatrix basis_;
    double scale_;
};

ComplexMatrix draw_simplified_channel(const SimplifiedChannelModel& model, int n_ues,
                                      numerics::RngStream& rng);

/// Assigned and RA channels of one realisation plus covariance metadata. For
/// the practical model the traces are averages over the drawn UEs and serve
/// reporting only.
struct ChannelSet {
    ComplexMatrix assigned;       ///< H_A, M x N_A
    ComplexMatrix random_access;  ///< H_R, M x N_R
    double tr_phi = 0.0;
    double tr_phi2 = 0.0;
    ModelKind model = ModelKind::Simplified;
};

/// Either channel model behind one draw interface. Copyable and immutable
/// after construction, so one instance can be shared by all trial workers.
class ChannelGenerator {
public:
    explicit ChannelGenerator(const ChannelParams& params);

    ModelKind kind() const noexcept;
    int antennas() const noexcept;
    int paths() const noexcept;
    const ChannelParams& params() const noexcept { return params_; }

    ComplexMatrix draw(int n_ues, numerics::RngStream& rng) const;
    ChannelSet draw_set(int n_assigned, int n_random_access, numerics::RngStream& rng) const;

private:
    ChannelParams params_;
    std::variant<PracticalChannelParams, SimplifiedChannelModel> model_;
};

}  // namespace vcsra::channel
