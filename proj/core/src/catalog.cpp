#include "sdde/catalog.hpp"

#include <algorithm>
#include <cmath>

namespace sdde {
namespace {

ModelParams merged(const ModelCatalogEntry& entry, const ModelParams& params) {
  ModelParams out = entry.defaults;
  for (const auto& [key, value] : params) {
    if (!out.count(key)) throw DomainError("model '" + entry.id + "' has no parameter '" + key + "'");
    if (!std::isfinite(value)) throw DomainError("parameter '" + key + "' of model '" + entry.id + "' is not finite");
    out[key] = value;
  }
  return out;
}

double sech2(double x) {
  const double c = std::cosh(x);
  return 1.0 / (c * c);
}

void constant_diffusion(SddeModel& m, double s) {
  m.diffusion = [s](SegmentView, std::span<double> out) { out[0] = s; };
  if (s != 0.0) {
    m.diffusion_right_inverse = [s](SegmentView, std::span<double> out) { out[0] = 1.0 / s; };
    m.holder.inverse_bound = 1.0 / std::abs(s);
  }
  m.diffusion_gradient = [](SegmentView, SegmentView, std::span<double> out) { out[0] = 0.0; };
}

SddeModel linear_delay(const ModelParams& p) {
  const double k0 = p.at("kappa0"), k1 = p.at("kappa1");
  SddeModel m;
  m.name = "linear-delay";
  m.drift = [k0, k1](SegmentView x, std::span<double> out) { out[0] = -k0 * x.now()[0] - k1 * x.delayed()[0]; };
  m.drift_gradient = [k0, k1](SegmentView, SegmentView u, std::span<double> out) {
    out[0] = -k0 * u.now()[0] - k1 * u.delayed()[0];
  };
  constant_diffusion(m, p.at("sigma"));
  m.holder = {1.0, 1.0, std::max(1.0, std::abs(k0) + std::abs(k1)), m.holder.inverse_bound};
  return m;
}

double holder_part(double x) { return -std::copysign(std::sqrt(std::abs(x)), x); }

SddeModel holder_drift(const ModelParams& p, double eps) {
  const double c = p.at("c");
  SddeModel m;
  m.name = "holder-drift";
  m.drift = [c, eps](SegmentView x, std::span<double> out) {
    const double x0 = x.now()[0];
    const double core = (eps > 0 && std::abs(x0) <= eps) ? -x0 / std::sqrt(eps) : holder_part(x0);
    out[0] = core + c * std::tanh(x.delayed()[0]);
  };
  constant_diffusion(m, p.at("sigma"));
  m.diffusion_gradient = nullptr;
  m.holder = {0.5, 1.0, std::max(1.0, std::abs(c)), m.holder.inverse_bound};
  return m;
}

SddeModel tanh_smooth(const ModelParams& p) {
  const double k = p.at("kappa"), c = p.at("c"), s0 = p.at("s0"), s1 = p.at("s1");
  if (!(s0 > 0) || !(std::abs(s1) < 1)) throw DomainError("tanh-smooth needs s0 > 0 and |s1| < 1");
  SddeModel m;
  m.name = "tanh-smooth";
  m.drift = [k, c](SegmentView x, std::span<double> out) { out[0] = -k * x.now()[0] + c * std::tanh(x.delayed()[0]); };
  m.diffusion = [s0, s1](SegmentView x, std::span<double> out) { out[0] = s0 * (1.0 + s1 * std::tanh(x.delayed()[0])); };
  m.diffusion_right_inverse = [s0, s1](SegmentView x, std::span<double> out) {
    out[0] = 1.0 / (s0 * (1.0 + s1 * std::tanh(x.delayed()[0])));
  };
  m.drift_gradient = [k, c](SegmentView x, SegmentView u, std::span<double> out) {
    out[0] = -k * u.now()[0] + c * sech2(x.delayed()[0]) * u.delayed()[0];
  };
  m.diffusion_gradient = [s0, s1](SegmentView x, SegmentView u, std::span<double> out) {
    out[0] = s0 * s1 * sech2(x.delayed()[0]) * u.delayed()[0];
  };
  m.holder = {1.0, 1.0, std::max({1.0, std::abs(k) + std::abs(c), std::abs(s0 * s1)}),
              1.0 / (s0 * (1.0 - std::abs(s1)))};
  return m;
}

SddeModel prop_kappa(const ModelParams& p) {
  const double kappa = p.at("kappa"), A = p.at("A"), c = p.at("c");
  if (!(kappa >= -1)) throw DomainError("prop-kappa needs kappa >= -1");
  if (!(A > 0)) throw DomainError("prop-kappa needs A > 0");
  const double e = 0.5 * (kappa - 1.0);
  SddeModel m;
  m.name = "prop-kappa";
  m.drift = [A, c, e](SegmentView x, std::span<double> out) {
    const double x0 = x.now()[0];
    out[0] = -A * x0 * std::pow(1.0 + x0 * x0, e) + c * std::tanh(x.delayed()[0]);
  };
  m.drift_gradient = [A, c, e](SegmentView x, SegmentView u, std::span<double> out) {
    const double x0 = x.now()[0];
    const double w = 1.0 + x0 * x0;
    const double g = std::pow(w, e - 1.0) * (w + 2.0 * e * x0 * x0);
    out[0] = -A * g * u.now()[0] + c * sech2(x.delayed()[0]) * u.delayed()[0];
  };
  constant_diffusion(m, p.at("sigma"));
  m.holder = {1.0, 1.0, std::max(1.0, A + std::abs(c)), m.holder.inverse_bound};
  return m;
}

SddeModel ou_nodelay(const ModelParams& p) {
  const double theta = p.at("theta");
  SddeModel m;
  m.name = "ou-nodelay";
  m.drift = [theta](SegmentView x, std::span<double> out) { out[0] = -theta * x.now()[0]; };
  m.drift_gradient = [theta](SegmentView, SegmentView u, std::span<double> out) { out[0] = -theta * u.now()[0]; };
  constant_diffusion(m, p.at("sigma"));
  m.holder = {1.0, 1.0, std::max(1.0, std::abs(theta)), m.holder.inverse_bound};
  return m;
}

std::vector<ModelCatalogEntry> build_catalog() {
  std::vector<ModelCatalogEntry> c;
  c.push_back({"linear-delay", "a(x) = -kappa0 x(0) - kappa1 x(-r), constant sigma", 1.0, 1.0,
               {{"kappa0", 1.0}, {"kappa1", 0.5}, {"sigma", 0.5}}, linear_delay});
  c.push_back({"holder-drift", "a(x) = -sign(x(0)) |x(0)|^(1/2) + c tanh(x(-r)), constant sigma", 0.5, 1.0,
               {{"c", 0.5}, {"sigma", 1.0}}, [](const ModelParams& p) { return holder_drift(p, 0.0); }});
  c.push_back({"tanh-smooth",
               "a(x) = -kappa x(0) + c tanh(x(-r)), sigma(x) = s0 (1 + s1 tanh(x(-r))); smooth, bounded sigma", 1.0,
               1.0, {{"kappa", 1.0}, {"c", 0.5}, {"s0", 0.5}, {"s1", 0.5}}, tanh_smooth});
  c.push_back({"prop-kappa", "a(x) = -A x(0) (1 + x(0)^2)^((kappa-1)/2) + c tanh(x(-r)), constant sigma", 1.0, 1.0,
               {{"kappa", 1.0}, {"A", 1.0}, {"c", 0.5}, {"sigma", 0.5}}, prop_kappa});
  c.push_back({"ou-nodelay", "a(x) = -theta x(0), constant sigma; no delay dependence", 1.0, 1.0,
               {{"theta", 1.0}, {"sigma", 1.0}}, ou_nodelay});
  return c;
}

}  // namespace

const std::vector<ModelCatalogEntry>& list_models() {
  static const std::vector<ModelCatalogEntry> catalog = build_catalog();
  return catalog;
}

const ModelCatalogEntry& find_model(const std::string& id) {
  const auto& catalog = list_models();
  const auto it = std::find_if(catalog.begin(), catalog.end(), [&](const auto& e) { return e.id == id; });
  if (it == catalog.end()) throw UnknownModel("unknown model id '" + id + "'");
  return *it;
}

SddeModel make_model(const std::string& id, const ModelParams& params) {
  const auto& entry = find_model(id);
  SddeModel m = entry.make(merged(entry, params));
  m.validate();
  return m;
}

MollifiedFamily mollified_family(const std::string& id, const ModelParams& params) {
  const auto& entry = find_model(id);
  const ModelParams p = merged(entry, params);
  if (id == "holder-drift") {
    return [p](double eps) {
      if (!(eps > 0)) throw DomainError("mollification needs eps > 0");
      SddeModel m = holder_drift(p, eps);
      m.holder.alpha = 1.0;
      m.holder.constant = std::max(m.holder.constant, 1.0 / std::sqrt(eps));
      return m;
    };
  }
  SddeModel exact = make_model(id, params);
  return [exact](double) { return exact; };
}

}  // namespace sdde
