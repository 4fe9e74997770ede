#include "vcsra/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "vcsra/errors.hpp"

namespace vcsra::channel {

namespace {

constexpr std::uint64_t kBasisStream = 0xBA515BA515ULL;

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

// Phase increment between adjacent antennas for a path at phi_deg.

void check_dims(int M, int Q) {
    if (M < 1) throw ValidationError("antenna count M must be >= 1");
    if (Q < 1 || Q > M) {
        throw ValidationError("path count Q must satisfy 1 <= Q <= M (Q=" + std::to_string(Q) +
                              ", M=" + std::to_string(M) + ")");
    }
}

}  // namespace

void PracticalChannelParams::validate() const {
    check_dims(antennas, paths);
    if (!(spacing > 0.0)) throw ValidationError("antenna spacing must be positive");
    if (!(spread_deg >= 0.0)) throw ValidationError("angle spread must be >= 0");
    if (!(azimuth_min_deg <= azimuth_max_deg)) {
        throw ValidationError("azimuth interval is empty (min > max)");
    }
    if (azimuth_min_deg - spread_deg / 2.0 < -180.0 || azimuth_max_deg + spread_deg / 2.0 > 180.0) {
        throw ValidationError("azimuth interval plus half the angle spread leaves [-180, 180] degrees");
    }
}

void SimplifiedChannelParams::validate() const { check_dims(antennas, paths); }

CovarianceTraces covariance_traces(const ChannelParams& params) {
    if (std::holds_alternative<PracticalChannelParams>(params)) {
        throw ModelMismatch("covariance traces are only defined for the simplified channel model");
    }
    const auto& p = std::get<SimplifiedChannelParams>(params);
    p.validate();
    const double M = p.antennas;
    return {M, M * M / p.paths};
}

ComplexVector steering_vector(int M, double omega, double phi_deg, int Q) {
    if (M < 1 || Q < 1) throw DimensionError("steering vector needs M >= 1 and Q >= 1");
    ComplexVector a(M);
    const double norm = 1.0 / std::sqrt(static_cast<double>(Q));
    const double step = -2.0 * std::numbers::pi * omega * std::cos(deg_to_rad(phi_deg));
    for (int m = 0; m < M; ++m) a(m) = std::polar(norm, step * m);
    return a;
}

PracticalUe draw_practical_ue(const PracticalChannelParams& params, numerics::RngStream& rng) {
    PracticalUe ue;
    ue.azimuth_deg = rng.uniform(params.azimuth_min_deg, params.azimuth_max_deg);
    const double half = params.spread_deg / 2.0;
    ue.path_angles_deg.resize(params.paths);
    for (auto& phi : ue.path_angles_deg) phi = rng.uniform(ue.azimuth_deg - half, ue.azimuth_deg + half);
    ue.fading = numerics::sample_complex_gaussian(rng, params.paths);
    return ue;
}

ComplexMatrix mixing_matrix(const PracticalChannelParams& params, const PracticalUe& ue) {
    ComplexMatrix A(params.antennas, params.paths);
    for (int q = 0; q < params.paths; ++q) {
        A.col(q) = steering_vector(params.antennas, params.spacing, ue.path_angles_deg[q], params.paths);
    }
    return A;
}

ComplexVector synthesize(const PracticalChannelParams& params, const PracticalUe& ue) {
    constexpr int kBlock = 32;
    const int M = params.antennas;
    const int Q = params.paths;
    const double norm = 1.0 / std::sqrt(static_cast<double>(Q));
    // All Q phase recurrences advance together, re-anchored every kBlock
    // antennas to bound rounding drift.
    Eigen::ArrayXd phase(Q);
    for (int q = 0; q < Q; ++q) {
        phase(q) = -2.0 * std::numbers::pi * params.spacing *
                   std::cos(deg_to_rad(ue.path_angles_deg[q]));
    }
    const Eigen::ArrayXd step_re = phase.cos(), step_im = phase.sin();
    const Eigen::ArrayXd jump_re = (kBlock * phase).cos(), jump_im = (kBlock * phase).sin();
    Eigen::ArrayXd anchor_re = norm * ue.fading.real().array();
    Eigen::ArrayXd anchor_im = norm * ue.fading.imag().array();
    Eigen::ArrayXd cur_re(Q), cur_im(Q), next_re(Q);

    ComplexVector h(M);
    for (int m0 = 0; m0 < M; m0 += kBlock) {
        cur_re = anchor_re;
        cur_im = anchor_im;
        const int m_end = std::min(M, m0 + kBlock);
        for (int m = m0; m < m_end; ++m) {
            h(m) = cdouble(cur_re.sum(), cur_im.sum());
            next_re = cur_re * step_re - cur_im * step_im;
            cur_im = cur_re * step_im + cur_im * step_re;
            cur_re.swap(next_re);
        }
        next_re = anchor_re * jump_re - anchor_im * jump_im;
        anchor_im = anchor_re * jump_im + anchor_im * jump_re;
        anchor_re.swap(next_re);
    }
    return h;
}

double practical_tr_phi2(const PracticalChannelParams& params, const PracticalUe& ue) {
    const ComplexMatrix A = mixing_matrix(params, ue);
    return (A.adjoint() * A).squaredNorm();
}

ComplexMatrix draw_practical_channel(const PracticalChannelParams& params, int n_ues,
                                     numerics::RngStream& rng) {
    ComplexMatrix H(params.antennas, n_ues);
    for (int u = 0; u < n_ues; ++u) H.col(u) = synthesize(params, draw_practical_ue(params, rng));
    return H;
}

SimplifiedChannelModel::SimplifiedChannelModel(const SimplifiedChannelParams& params)
    : params_(params) {
    params_.validate();
    numerics::RngStream rng(params_.basis_seed, kBasisStream);
    basis_ = numerics::orthonormal_real_basis(params_.antennas, params_.paths, rng);
    scale_ = std::sqrt(static_cast<double>(params_.antennas) / params_.paths);
}

ComplexMatrix SimplifiedChannelModel::draw(int n_ues, numerics::RngStream& rng) const {
    const ComplexMatrix v = numerics::sample_complex_gaussian(rng, params_.paths, n_ues);
    // Real basis times complex fading, done as two real products.
    ComplexMatrix H(params_.antennas, n_ues);
    H.real() = scale_ * (basis_ * v.real());
    H.imag() = scale_ * (basis_ * v.imag());
    return H;
}

ComplexMatrix draw_simplified_channel(const SimplifiedChannelModel& model, int n_ues,
                                      numerics::RngStream& rng) {
    return model.draw(n_ues, rng);
}

ChannelGenerator::ChannelGenerator(const ChannelParams& params) : params_(params) {
    if (const auto* p = std::get_if<PracticalChannelParams>(&params)) {
        p->validate();
        model_ = *p;
    } else {
        model_ = SimplifiedChannelModel(std::get<SimplifiedChannelParams>(params));
    }
}

ModelKind ChannelGenerator::kind() const noexcept {
    return std::holds_alternative<PracticalChannelParams>(model_) ? ModelKind::Practical
                                                                  : ModelKind::Simplified;
}

int ChannelGenerator::antennas() const noexcept {
    return std::visit([](const auto& p) { return p.antennas; }, params_);
}

int ChannelGenerator::paths() const noexcept {
    return std::visit([](const auto& p) { return p.paths; }, params_);
}

ComplexMatrix ChannelGenerator::draw(int n_ues, numerics::RngStream& rng) const {
    if (n_ues < 0) throw DimensionError("negative UE count");
    if (const auto* p = std::get_if<PracticalChannelParams>(&model_)) {
        return draw_practical_channel(*p, n_ues, rng);
    }
    return std::get<SimplifiedChannelModel>(model_).draw(n_ues, rng);
}

ChannelSet ChannelGenerator::draw_set(int n_assigned, int n_random_access,
                                      numerics::RngStream& rng) const {
    ChannelSet set;
    set.model = kind();
    if (const auto* p = std::get_if<PracticalChannelParams>(&model_)) {
        const int total = n_assigned + n_random_access;
        set.assigned.resize(p->antennas, n_assigned);
        set.random_access.resize(p->antennas, n_random_access);
        double tr2 = 0.0;
        for (int u = 0; u < total; ++u) {
            const PracticalUe ue = draw_practical_ue(*p, rng);
            const ComplexVector h = synthesize(*p, ue);
            if (u < n_assigned) {
                set.assigned.col(u) = h;
            } else {
                set.random_access.col(u - n_assigned) = h;
            }
            tr2 += practical_tr_phi2(*p, ue);
        }
        // Every steering vector has squared norm M/Q, so tr(A_u A_u^H) = M for all UEs.
        set.tr_phi = p->antennas;
        set.tr_phi2 = total > 0 ? tr2 / total : 0.0;
        return set;
    }
    const auto& model = std::get<SimplifiedChannelModel>(model_);
    set.assigned = model.draw(n_assigned, rng);
    set.random_access = model.draw(n_random_access, rng);
    const auto traces = covariance_traces(params_);
    set.tr_phi = traces.tr_phi;
    set.tr_phi2 = traces.tr_phi2;
    return set;
}

}  // namespace vcsra::channel
