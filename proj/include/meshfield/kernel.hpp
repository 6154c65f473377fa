#pragma once

#include <optional>
#include <string>

#include "meshfield/types.hpp"

namespace meshfield {

enum class KernelFamily {
    Cubic,
    Gaussian,
    ThinPlateSpline,
    InverseMultiquadric,
    Multiquadric,
    LocalPoly2,
    LocalPoly4,
};

/// Whether the gradient and the Hessian of the RBFs generated by a kernel
/// are well defined at the centre. The gradient exists iff phi'(0) = 0;
/// the Hessian entries need a finite phi''(0).
struct DerivativeExistence {
    bool gradient_exists = false;
    bool hessian_exists = false;
    std::string condition_note;
};

/// A 1D generating function phi(r; sigma) with analytic first and second
/// derivatives. RBFs are built as phi_i(p) = phi(|p - c_i|).
///
/// Local families (LocalPoly2/LocalPoly4) evaluate phi(r / rho) with an
/// explicit support radius rho and vanish identically for r >= rho.
/// Immutable after construction; all member functions are pure.
class Kernel {
public:
    Kernel(KernelFamily family, double sigma,
           std::optional<double> support_radius = std::nullopt);

    KernelFamily family() const { return family_; }
    double sigma() const { return sigma_; }
    std::optional<double> support_radius() const { return support_; }
    bool is_local() const;

    /// phi(r; sigma).
    double eval(double r) const;
    /// phi'(r; sigma). Throws CentreSingularityError where undefined (e.g.
    /// thin-plate spline at r = 0).
    double eval_d1(double r) const;
    /// phi''(r; sigma).
    double eval_d2(double r) const;

    DerivativeExistence existence_flags() const;

    /// Gradient of the RBF centred at `centre`, evaluated at `p`:
    /// phi'(r) (p - c) / r. At p == centre returns the zero vector when
    /// phi'(0) = 0, otherwise throws.
    Vec3 rbf_gradient(const Vec3& centre, const Vec3& p) const;

    /// Hessian of the RBF: phi'' e e^T + phi'(r)/r (I - e e^T), with
    /// e = (p - c)/r. For dim == 2 the third row/column are zero.
    /// At p == centre the limit is direction-dependent unless phi''(0) = 0;
    /// that case throws CentreSingularityError.
    Mat3 rbf_hessian(const Vec3& centre, const Vec3& p, int dim) const;

    /// Laplacian of the RBF: phi''(r) + (d-1) phi'(r)/r. Well defined at the
    /// centre whenever phi''(0) exists (limit d * phi''(0)).
    double rbf_laplacian(const Vec3& centre, const Vec3& p, int dim) const;

    /// Text record: family name, sigma, optional support radius
    /// ("gaussian 1", "wendland2 0 0.5").
    std::string to_string() const;
    static Kernel parse(const std::string& text);

    static std::string family_name(KernelFamily f);
    static KernelFamily family_from_name(const std::string& name);

private:
    KernelFamily family_;
    double sigma_;
    std::optional<double> support_;
};

}  // namespace meshfield
