#pragma once

#include <optional>
#include <span>
#include <string>

#include "locreg/errors.hpp"

namespace locreg {

enum class KernelFamily { epanechnikov, gaussian };

KernelFamily kernel_family_from_string(const std::string& name);
std::string to_string(KernelFamily family);

/// Radially symmetric product kernel K_h(u) = h^-D K(u/h) with a single scalar
/// bandwidth. Profiles are unnormalized (K(0) = 1 for both families); any
/// positive multiple of K cancels in the estimator.
struct KernelSpec {
    KernelFamily family = KernelFamily::epanechnikov;
    double h = 1.0;
    std::size_t dim = 1;

    void validate() const;

    double inv_h2() const { return 1.0 / (h * h); }
    /// The h^-D prefactor.
    double scale() const;
    /// Weight of a zero offset: h^-D * K(0) = scale().
    double self_weight() const { return scale(); }
};

/// K_h(u) for a single offset vector u.
double kernel_value(const KernelSpec& spec, std::span<const double> offset);

/// Kernel weight from a squared offset norm, with the same arithmetic as the
/// batch path in simd::Ops.
double weight_from_dist2(const KernelSpec& spec, double d2);

/// Batch weights from squared distances, dispatched to the active SIMD backend.
void kernel_weights(const KernelSpec& spec, const double* d2, std::size_t n,
                    double* out);

/// h for compact-support families; nullopt marks unbounded support.
std::optional<double> support_radius(const KernelSpec& spec);

}  // namespace locreg
