#include "hypbill/cone.hpp"

#include <cmath>
#include <sstream>

namespace hypb {

namespace {

constexpr double kPi = M_PI;

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::string str(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << '/' << r.denominator();
  return os.str();
}

}  // namespace

PiAngle PiAngle::fraction(long long p, long long q) {
  if (q <= 0) throw InvalidData("denominator must be positive");
  PiAngle a;
  a.multiple = Rational(p, q);
  a.radians = kPi * to_double(*a.multiple);
  return a;
}

PiAngle PiAngle::numeric(double radians) {
  PiAngle a;
  a.radians = radians;
  return a;
}

std::optional<Rational> cone_area_over_pi(const ConeSurfaceData& data) {
  Rational s(4 * (data.genus - 1) + 2 * static_cast<long long>(data.cone_angles.size()));
  for (const auto& a : data.cone_angles) {
    if (!a.multiple) return std::nullopt;
    s -= *a.multiple;
  }
  return s;
}

double cone_area(const ConeSurfaceData& data) {
  if (data.genus < 0) throw InvalidData("genus must be non-negative");
  double area;
  if (auto exact = cone_area_over_pi(data)) {
    if (*exact <= 0) throw InvalidData("area " + str(*exact) + "*pi is not positive");
    area = kPi * to_double(*exact);
  } else {
    area = 4.0 * kPi * (data.genus - 1) + 2.0 * kPi * static_cast<double>(data.cone_angles.size());
    for (const auto& a : data.cone_angles) area -= a.radians;
    if (!(area > 0.0)) throw InvalidData("area is not positive");
  }
  return area;
}

Rational orbifold_area_over_pi(const OrbifoldSignature& sig) {
  Rational s(2 * sig.genus - 2);
  for (int b : sig.orders) {
    if (b < 2) throw InvalidData("orbifold orders must be at least 2");
    s += Rational(1) - Rational(1, b);
  }
  return 2 * s;
}

bool is_hyperbolic(const OrbifoldSignature& sig) { return sig.genus >= 0 && orbifold_area_over_pi(sig) > 0; }

double orbifold_area(const OrbifoldSignature& sig) {
  if (sig.genus < 0) throw InvalidData("genus must be non-negative");
  Rational a = orbifold_area_over_pi(sig);
  if (a <= 0) throw NotHyperbolic("orbifold area " + str(a) + "*pi is not positive");
  return kPi * to_double(a);
}

ConeSurfaceData double_of(const LabeledPolygon& poly) {
  ConeSurfaceData d;
  d.genus = 0;
  for (const auto& a : poly.angles()) {
    if (auto r = a.declared()) {
      d.cone_angles.push_back(PiAngle::fraction(2 * r->first, r->second));
    } else {
      d.cone_angles.push_back(PiAngle::numeric(2.0 * a.value()));
    }
  }
  return d;
}

CoverReport validate_cover(const BranchedCoverData& data) {
  CoverReport rep;
  auto fail = [&](const std::string& s) {
    rep.valid = false;
    rep.failures.push_back(s);
  };
  const auto& orders = data.orbifold.orders;
  const int m = static_cast<int>(orders.size());
  const int k = static_cast<int>(data.surface.cone_angles.size());
  try {
    rep.orbifold_area = orbifold_area(data.orbifold);
  } catch (const std::exception& e) {
    fail(e.what());
  }
  try {
    rep.surface_area = cone_area(data.surface);
  } catch (const std::exception& e) {
    fail(e.what());
  }
  if (data.degree < 2) fail("degree must be at least 2");
  if (k < 1) fail("surface has no cone points");

  std::vector<int> fibre_count(m, 0);
  std::vector<int> cone_used(k, 0);
  for (const auto& f : data.fibres) {
    if (f.orbifold_point < 0 || f.orbifold_point >= m) {
      fail("fibre over unknown orbifold point " + std::to_string(f.orbifold_point));
      continue;
    }
    ++fibre_count[f.orbifold_point];
    const int b = orders[f.orbifold_point];
    const std::string where = "over orbifold point " + std::to_string(f.orbifold_point + 1);
    long sum = 0;
    for (const auto& p : f.preimages) {
      sum += p.local_degree;
      if (p.cone_index < 0) {
        if (p.local_degree != b) {
          fail("regular preimage " + where + " has local degree " + std::to_string(p.local_degree) +
               " instead of " + std::to_string(b));
        }
        continue;
      }
      if (p.cone_index >= k) {
        fail("unknown cone point " + std::to_string(p.cone_index));
        continue;
      }
      ++cone_used[p.cone_index];
      if (p.local_degree < 3) fail("cone point " + std::to_string(p.cone_index + 1) + " has local degree below 3");
      if (b % 2 != 0) fail("cone point " + std::to_string(p.cone_index + 1) + " maps to an odd-order point");
      const PiAngle& theta = data.surface.cone_angles[p.cone_index];
      Rational expect(2LL * p.local_degree, b);
      bool match = theta.multiple ? *theta.multiple == expect
                                  : std::abs(theta.radians - kPi * to_double(expect)) < 1e-9;
      if (!match) fail("cone angle of point " + std::to_string(p.cone_index + 1) + " is not local degree * 2pi/b");
      if (!(theta.radians > 2.0 * kPi)) fail("cone angle of point " + std::to_string(p.cone_index + 1) + " is not above 2pi");
    }
    if (sum != data.degree) {
      fail("local degrees " + where + " sum to " + std::to_string(sum) + ", not " + std::to_string(data.degree));
    }
  }
  for (int i = 0; i < m; ++i) {
    if (fibre_count[i] != 1) fail("orbifold point " + std::to_string(i + 1) + " needs exactly one fibre");
  }
  for (int i = 0; i < k; ++i) {
    if (cone_used[i] != 1) fail("cone point " + std::to_string(i + 1) + " must appear in exactly one fibre");
  }
  if (rep.valid && std::abs(rep.surface_area - data.degree * rep.orbifold_area) >= 1e-9) {
    std::ostringstream os;
    os << "area " << rep.surface_area << " differs from degree * orbifold area " << data.degree * rep.orbifold_area;
    fail(os.str());
  }
  return rep;
}

BoundReport bound_check(const BranchedCoverData& data) {
  CoverReport v = validate_cover(data);
  if (!v.valid) throw InvalidData("cover is invalid: " + v.failures.front());
  BoundReport b;
  b.k = static_cast<int>(data.surface.cone_angles.size());
  for (int o : data.orbifold.orders) b.r += o % 2 == 0 ? 1 : 0;
  b.genus = data.surface.genus;
  b.bound = 32.0 * (b.genus - 1);
  b.rhs = 4.0 * b.r * kPi * (b.genus - 1) / (3.0 * v.orbifold_area);
  b.holds = b.k < b.rhs && b.k < b.bound;
  b.rhs_within_bound = b.rhs <= b.bound + 1e-9;
  return b;
}

}  // namespace hypb
