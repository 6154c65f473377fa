#include "meshfield/kernel.hpp"

#include <cmath>
#include <sstream>

namespace meshfield {

namespace {
constexpr double kCentreTol = 0.0;  // exact centre hit only
}

Kernel::Kernel(KernelFamily family, double sigma, std::optional<double> support_radius)
    : family_(family), sigma_(sigma), support_(support_radius) {
    switch (family_) {
        case KernelFamily::Multiquadric:
            if (sigma_ == 0.0) throw ConfigError("multiquadric kernel requires sigma != 0");
            if (sigma_ < 0.0) throw ConfigError("kernel sigma must be positive");
            break;
        case KernelFamily::ThinPlateSpline:
            if (sigma_ <= 0.0) throw ConfigError("thin-plate spline requires sigma > 0");
            break;
        default:
            if (sigma_ < 0.0) throw ConfigError("kernel sigma must be nonnegative");
            break;
    }
    if (is_local()) {
        if (!support_ || *support_ <= 0.0)
            throw ConfigError("local kernel requires a positive support_radius");
    }
}

bool Kernel::is_local() const {
    return family_ == KernelFamily::LocalPoly2 || family_ == KernelFamily::LocalPoly4;
}

double Kernel::eval(double r) const {
    switch (family_) {
        case KernelFamily::Cubic:
            return sigma_ * r * r * r;
        case KernelFamily::Gaussian:
            return std::exp(-sigma_ * r * r);
        case KernelFamily::ThinPlateSpline:
            // r^2 log(sigma r) -> 0 as r -> 0 (defined by continuity).
            return r == 0.0 ? 0.0 : r * r * std::log(sigma_ * r);
        case KernelFamily::InverseMultiquadric:
            return 1.0 / std::sqrt(r * r + sigma_ * sigma_);
        case KernelFamily::Multiquadric:
            return std::sqrt(r * r + sigma_ * sigma_);
        case KernelFamily::LocalPoly2: {
            double s = r / *support_;
            if (s >= 1.0) return 0.0;
            double t = 1.0 - s;
            return t * t;
        }
        case KernelFamily::LocalPoly4: {
            double s = r / *support_;
            if (s >= 1.0) return 0.0;
            double t = 1.0 - s;
            return t * t * t * t * (4.0 * s + 1.0);
        }
    }
    throw ConfigError("unknown kernel family");
}

double Kernel::eval_d1(double r) const {
    switch (family_) {
        case KernelFamily::Cubic:
            return 3.0 * sigma_ * r * r;
        case KernelFamily::Gaussian:
            return -2.0 * sigma_ * r * std::exp(-sigma_ * r * r);
        case KernelFamily::ThinPlateSpline:
            if (r == 0.0)
                throw CentreSingularityError("thin-plate spline derivative undefined at r = 0");
            return 2.0 * r * std::log(sigma_ * r) + r;
        case KernelFamily::InverseMultiquadric: {
            if (r == 0.0 && sigma_ == 0.0)
                throw CentreSingularityError(
                    "inverse multiquadric derivative undefined at r = 0 with sigma = 0");
            double q = r * r + sigma_ * sigma_;
            return -r / (q * std::sqrt(q));
        }
        case KernelFamily::Multiquadric:
            return r / std::sqrt(r * r + sigma_ * sigma_);
        case KernelFamily::LocalPoly2: {
            double s = r / *support_;
            if (s >= 1.0) return 0.0;
            return -2.0 * (1.0 - s) / *support_;
        }
        case KernelFamily::LocalPoly4: {
            double s = r / *support_;
            if (s >= 1.0) return 0.0;
            double t = 1.0 - s;
            return -20.0 * s * t * t * t / *support_;
        }
    }
    throw ConfigError("unknown kernel family");
}

double Kernel::eval_d2(double r) const {
    switch (family_) {
        case KernelFamily::Cubic:
            return 6.0 * sigma_ * r;
        case KernelFamily::Gaussian:
            return -2.0 * sigma_ * (1.0 - 2.0 * sigma_ * r * r) * std::exp(-sigma_ * r * r);
        case KernelFamily::ThinPlateSpline:
            if (r == 0.0)
                throw CentreSingularityError(
                    "thin-plate spline second derivative undefined at r = 0");
            return 2.0 * std::log(sigma_ * r) + 3.0;
        case KernelFamily::InverseMultiquadric: {
            if (r == 0.0 && sigma_ == 0.0)
                throw CentreSingularityError(
                    "inverse multiquadric second derivative undefined at r = 0 with sigma = 0");
            double q = r * r + sigma_ * sigma_;
            return (2.0 * r * r - sigma_ * sigma_) / (q * q * std::sqrt(q));
        }
        case KernelFamily::Multiquadric: {
            double q = r * r + sigma_ * sigma_;
            return sigma_ * sigma_ / (q * std::sqrt(q));
        }
        case KernelFamily::LocalPoly2: {
            double s = r / *support_;
            if (s >= 1.0) return 0.0;
            return 2.0 / (*support_ * *support_);
        }
        case KernelFamily::LocalPoly4: {
            double s = r / *support_;
            if (s >= 1.0) return 0.0;
            double t = 1.0 - s;
            return -20.0 * t * t * (1.0 - 4.0 * s) / (*support_ * *support_);
        }
    }
    throw ConfigError("unknown kernel family");
}

DerivativeExistence Kernel::existence_flags() const {
    switch (family_) {
        case KernelFamily::Cubic:
            return {true, true, "phi'(0) = 0 for every sigma"};
        case KernelFamily::Gaussian:
            return {true, true, ""};
        case KernelFamily::ThinPlateSpline:
            return {false, false, "r^2 log r has no derivative at 0"};
        case KernelFamily::InverseMultiquadric:
            if (sigma_ == 0.0)
                return {false, false, "requires sigma != 0"};
            return {true, true, "requires sigma != 0"};
        case KernelFamily::Multiquadric:
            return {true, true, "requires sigma != 0"};
        case KernelFamily::LocalPoly2:
            return {false, true, "phi'(0) = -2/rho != 0"};
        case KernelFamily::LocalPoly4:
            return {true, true, ""};
    }
    throw ConfigError("unknown kernel family");
}

Vec3 Kernel::rbf_gradient(const Vec3& centre, const Vec3& p) const {
    Vec3 d = p - centre;
    double r = d.norm();
    if (r <= kCentreTol) {
        if (!existence_flags().gradient_exists)
            throw CentreSingularityError("RBF gradient undefined at the centre (phi'(0) != 0)");
        return Vec3::Zero();
    }
    return (eval_d1(r) / r) * d;
}

Mat3 Kernel::rbf_hessian(const Vec3& centre, const Vec3& p, int dim) const {
    Vec3 d = p - centre;
    double r = d.norm();
    if (r <= kCentreTol) {
        double d2 = eval_d2(0.0);
        if (d2 != 0.0)
            throw CentreSingularityError(
                "RBF Hessian limit at the centre is direction-dependent (phi''(0) != 0)");
        return Mat3::Zero();
    }
    Vec3 e = d / r;
    double d1r = eval_d1(r) / r;
    double d2 = eval_d2(r);
    Mat3 h = (d2 - d1r) * (e * e.transpose());
    h.diagonal().array() += d1r;
    if (dim == 2) {
        h.row(2).setZero();
        h.col(2).setZero();
    }
    return h;
}

double Kernel::rbf_laplacian(const Vec3& centre, const Vec3& p, int dim) const {
    double r = (p - centre).norm();
    if (r <= kCentreTol) return dim * eval_d2(0.0);
    return eval_d2(r) + (dim - 1) * eval_d1(r) / r;
}

std::string Kernel::family_name(KernelFamily f) {
    switch (f) {
        case KernelFamily::Cubic: return "cubic";
        case KernelFamily::Gaussian: return "gaussian";
        case KernelFamily::ThinPlateSpline: return "tps";
        case KernelFamily::InverseMultiquadric: return "imq";
        case KernelFamily::Multiquadric: return "mq";
        case KernelFamily::LocalPoly2: return "wendland2";
        case KernelFamily::LocalPoly4: return "wendland4";
    }
    throw ConfigError("unknown kernel family");
}

KernelFamily Kernel::family_from_name(const std::string& name) {
    if (name == "cubic") return KernelFamily::Cubic;
    if (name == "gaussian") return KernelFamily::Gaussian;
    if (name == "tps") return KernelFamily::ThinPlateSpline;
    if (name == "imq") return KernelFamily::InverseMultiquadric;
    if (name == "mq") return KernelFamily::Multiquadric;
    if (name == "wendland2") return KernelFamily::LocalPoly2;
    if (name == "wendland4") return KernelFamily::LocalPoly4;
    throw ConfigError("unknown kernel family name: " + name);
}

std::string Kernel::to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << family_name(family_) << ' ' << sigma_;
    if (support_) os << ' ' << *support_;
    return os.str();
}

Kernel Kernel::parse(const std::string& text) {
    std::istringstream is(text);
    std::string name;
    double sigma;
    if (!(is >> name >> sigma)) throw ConfigError("malformed kernel record: " + text);
    double support;
    if (is >> support) return Kernel(family_from_name(name), sigma, support);
    return Kernel(family_from_name(name), sigma);
}

}  // namespace meshfield
