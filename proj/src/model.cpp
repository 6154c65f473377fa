#include "meshfield/model.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace meshfield {

using nlohmann::json;

namespace {

json centres_to_json(const std::vector<Vec3>& centres, int dim) {
    json arr = json::array();
    for (const Vec3& c : centres) {
        json pt = json::array({c.x(), c.y()});
        if (dim == 3) pt.push_back(c.z());
        arr.push_back(std::move(pt));
    }
    return arr;
}

std::vector<Vec3> centres_from_json(const json& arr, int dim) {
    std::vector<Vec3> centres;
    centres.reserve(arr.size());
    for (const auto& pt : arr) {
        if (static_cast<int>(pt.size()) != dim)
            throw InputError("model centre dimension mismatch");
        centres.emplace_back(pt[0].get<double>(), pt[1].get<double>(),
                             dim == 3 ? pt[2].get<double>() : 0.0);
    }
    return centres;
}

}  // namespace

ScalarPotentialModel::ScalarPotentialModel(Kernel kernel, int dimension,
                                           std::vector<Vec3> centres,
                                           Eigen::VectorXd coefficients)
    : kernel_(std::move(kernel)),
      dim_(dimension),
      centres_(std::move(centres)),
      coeffs_(std::move(coefficients)) {
    if (dim_ != 2 && dim_ != 3) throw ConfigError("model dimension must be 2 or 3");
    if (static_cast<std::size_t>(coeffs_.size()) != centres_.size())
        throw ConfigError("coefficient count must equal centre count");
}

double ScalarPotentialModel::eval(const Vec3& p) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < centres_.size(); ++i)
        sum += coeffs_[static_cast<Eigen::Index>(i)] * kernel_.eval((p - centres_[i]).norm());
    return sum;
}

Vec3 ScalarPotentialModel::gradient(const Vec3& p) const {
    Vec3 g = Vec3::Zero();
    for (std::size_t i = 0; i < centres_.size(); ++i)
        g += coeffs_[static_cast<Eigen::Index>(i)] * kernel_.rbf_gradient(centres_[i], p);
    return g;
}

Mat3 ScalarPotentialModel::hessian(const Vec3& p) const {
    Mat3 h = Mat3::Zero();
    for (std::size_t i = 0; i < centres_.size(); ++i)
        h += coeffs_[static_cast<Eigen::Index>(i)] * kernel_.rbf_hessian(centres_[i], p, dim_);
    return h;
}

double ScalarPotentialModel::laplacian(const Vec3& p) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < centres_.size(); ++i)
        sum += coeffs_[static_cast<Eigen::Index>(i)] * kernel_.rbf_laplacian(centres_[i], p, dim_);
    return sum;
}

std::string ScalarPotentialModel::to_json() const {
    json j;
    j["type"] = "scalar_potential";
    j["dimension"] = dim_;
    j["kernel"] = kernel_.to_string();
    j["centres"] = centres_to_json(centres_, dim_);
    j["coefficients"] = std::vector<double>(coeffs_.data(), coeffs_.data() + coeffs_.size());
    return j.dump(1);
}

ScalarPotentialModel ScalarPotentialModel::from_json(const std::string& text) {
    json j = json::parse(text);
    if (j.at("type") != "scalar_potential") throw InputError("not a scalar potential model file");
    int dim = j.at("dimension").get<int>();
    Kernel kernel = Kernel::parse(j.at("kernel").get<std::string>());
    auto centres = centres_from_json(j.at("centres"), dim);
    auto coeffs_vec = j.at("coefficients").get<std::vector<double>>();
    Eigen::VectorXd coeffs =
        Eigen::Map<const Eigen::VectorXd>(coeffs_vec.data(), coeffs_vec.size());
    return ScalarPotentialModel(std::move(kernel), dim, std::move(centres), std::move(coeffs));
}

void ScalarPotentialModel::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write model file: " + path);
    out << to_json() << '\n';
}

ScalarPotentialModel ScalarPotentialModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open model file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return from_json(os.str());
}

VectorPotentialModel::VectorPotentialModel(Kernel kernel, int dimension,
                                           std::vector<Vec3> centres,
                                           Eigen::MatrixXd coefficients)
    : kernel_(std::move(kernel)),
      dim_(dimension),
      centres_(std::move(centres)),
      coeffs_(std::move(coefficients)) {
    if (dim_ != 2 && dim_ != 3) throw ConfigError("model dimension must be 2 or 3");
    const Eigen::Index expected_rows = dim_ == 3 ? 3 : 1;
    if (coeffs_.rows() != expected_rows)
        throw ConfigError("vector potential needs 3 coefficient blocks in 3D, 1 in 2D");
    if (static_cast<std::size_t>(coeffs_.cols()) != centres_.size())
        throw ConfigError("coefficient count must equal centre count");
}

Vec3 VectorPotentialModel::eval_potential(const Vec3& p) const {
    Vec3 w = Vec3::Zero();
    for (std::size_t i = 0; i < centres_.size(); ++i) {
        double phi = kernel_.eval((p - centres_[i]).norm());
        for (Eigen::Index c = 0; c < coeffs_.rows(); ++c)
            w[c] += coeffs_(c, static_cast<Eigen::Index>(i)) * phi;
    }
    return w;
}

Vec3 VectorPotentialModel::curl(const Vec3& p) const {
    Vec3 out = Vec3::Zero();
    if (dim_ == 3) {
        for (std::size_t i = 0; i < centres_.size(); ++i) {
            Vec3 g = kernel_.rbf_gradient(centres_[i], p);
            const Eigen::Index k = static_cast<Eigen::Index>(i);
            out.x() += coeffs_(2, k) * g.y() - coeffs_(1, k) * g.z();
            out.y() += coeffs_(0, k) * g.z() - coeffs_(2, k) * g.x();
            out.z() += coeffs_(1, k) * g.x() - coeffs_(0, k) * g.y();
        }
    } else {
        for (std::size_t i = 0; i < centres_.size(); ++i) {
            Vec3 g = kernel_.rbf_gradient(centres_[i], p);
            const double a = coeffs_(0, static_cast<Eigen::Index>(i));
            out.x() += a * g.y();
            out.y() -= a * g.x();
        }
    }
    return out;
}

double VectorPotentialModel::curl_divergence(const Vec3& p) const {
    // Each term pairs mixed partials of one RBF; Schwartz symmetry makes the
    // sum vanish analytically.
    double div = 0.0;
    for (std::size_t i = 0; i < centres_.size(); ++i) {
        Mat3 h = kernel_.rbf_hessian(centres_[i], p, dim_);
        const Eigen::Index k = static_cast<Eigen::Index>(i);
        if (dim_ == 3) {
            div += coeffs_(2, k) * (h(0, 1) - h(1, 0));
            div += coeffs_(1, k) * (h(2, 0) - h(0, 2));
            div += coeffs_(0, k) * (h(1, 2) - h(2, 1));
        } else {
            div += coeffs_(0, k) * (h(0, 1) - h(1, 0));
        }
    }
    return div;
}

std::string VectorPotentialModel::to_json() const {
    json j;
    j["type"] = "vector_potential";
    j["dimension"] = dim_;
    j["kernel"] = kernel_.to_string();
    j["centres"] = centres_to_json(centres_, dim_);
    json blocks = json::array();
    for (Eigen::Index r = 0; r < coeffs_.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < coeffs_.cols(); ++c) row.push_back(coeffs_(r, c));
        blocks.push_back(std::move(row));
    }
    j["coefficients"] = std::move(blocks);
    return j.dump(1);
}

VectorPotentialModel VectorPotentialModel::from_json(const std::string& text) {
    json j = json::parse(text);
    if (j.at("type") != "vector_potential") throw InputError("not a vector potential model file");
    int dim = j.at("dimension").get<int>();
    Kernel kernel = Kernel::parse(j.at("kernel").get<std::string>());
    auto centres = centres_from_json(j.at("centres"), dim);
    const json& blocks = j.at("coefficients");
    Eigen::MatrixXd coeffs(blocks.size(), centres.size());
    for (Eigen::Index r = 0; r < coeffs.rows(); ++r)
        for (Eigen::Index c = 0; c < coeffs.cols(); ++c)
            coeffs(r, c) = blocks[r][c].get<double>();
    return VectorPotentialModel(std::move(kernel), dim, std::move(centres), std::move(coeffs));
}

void VectorPotentialModel::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write model file: " + path);
    out << to_json() << '\n';
}

VectorPotentialModel VectorPotentialModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open model file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return from_json(os.str());
}

DivCurl eval_field_divergence_curl(const std::vector<ScalarPotentialModel>& components,
                                   const Vec3& p) {
    if (components.empty()) throw InputError("no component models");
    const int dim = components.front().dimension();
    if (static_cast<int>(components.size()) != dim)
        throw InputError("need one component model per dimension");
    DivCurl out{0.0, Vec3::Zero()};
    Eigen::Matrix3d jac = Eigen::Matrix3d::Zero();  // jac(r, c) = d_c v_r
    for (int c = 0; c < dim; ++c) jac.row(c) = components[c].gradient(p).transpose();
    for (int c = 0; c < dim; ++c) out.divergence += jac(c, c);
    if (dim == 3) {
        out.curl = Vec3(jac(2, 1) - jac(1, 2), jac(0, 2) - jac(2, 0), jac(1, 0) - jac(0, 1));
    } else {
        out.curl = Vec3(0, 0, jac(1, 0) - jac(0, 1));
    }
    return out;
}

}  // namespace meshfield
