#include "locreg/kernels.hpp"

#include <cmath>

#include "locreg/simd/kernels.hpp"

namespace locreg {

KernelFamily kernel_family_from_string(const std::string& name) {
    if (name == "epanechnikov") return KernelFamily::epanechnikov;
    if (name == "gaussian") return KernelFamily::gaussian;
    raise(ErrorCode::InvalidArgument, "unknown kernel family '" + name + "'");
}

std::string to_string(KernelFamily family) {
    return family == KernelFamily::epanechnikov ? "epanechnikov" : "gaussian";
}

void KernelSpec::validate() const {
    if (!(h > 0.0) || !std::isfinite(h))
        raise(ErrorCode::NonPositiveBandwidth,
              "bandwidth must be positive and finite, got " + std::to_string(h));
    if (dim == 0)
        raise(ErrorCode::DimensionMismatch, "kernel dimension must be >= 1");
}

double KernelSpec::scale() const {
    return std::pow(h, -static_cast<double>(dim));
}

double weight_from_dist2(const KernelSpec& spec, double d2) {
    if (spec.family == KernelFamily::epanechnikov) {
        const double u = 1.0 - d2 * spec.inv_h2();
        return u > 0.0 ? u * spec.scale() : 0.0;
    }
    return spec.scale() * std::exp(-0.5 * (d2 * spec.inv_h2()));
}

double kernel_value(const KernelSpec& spec, std::span<const double> offset) {
    spec.validate();
    if (offset.size() != spec.dim)
        raise(ErrorCode::DimensionMismatch,
              "offset has dimension " + std::to_string(offset.size()) +
                  ", kernel expects " + std::to_string(spec.dim));
    double d = offset[0];
    double d2 = d * d;
    for (std::size_t a = 1; a < offset.size(); ++a) {
        d = offset[a];
        d2 = std::fma(d, d, d2);
    }
    return weight_from_dist2(spec, d2);
}

void kernel_weights(const KernelSpec& spec, const double* d2, std::size_t n,
                    double* out) {
    const auto& ops = simd::active_ops();
    if (spec.family == KernelFamily::epanechnikov)
        ops.epanechnikov_weights(d2, n, spec.inv_h2(), spec.scale(), out);
    else
        ops.gaussian_weights(d2, n, spec.inv_h2(), spec.scale(), out);
}

std::optional<double> support_radius(const KernelSpec& spec) {
    spec.validate();
    if (spec.family == KernelFamily::epanechnikov) return spec.h;
    return std::nullopt;
}

}  // namespace locreg
