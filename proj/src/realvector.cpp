#include "kron/realvector.hpp"

#include <cctype>
#include <cmath>
#include <regex>

namespace kron {

namespace {

bool is_square(long long D) {
  if (D < 0) return false;
  long long r = static_cast<long long>(std::sqrt(static_cast<double>(D)));
  for (long long s = r > 1 ? r - 1 : 0; s <= r + 1; ++s)
    if (s * s == D) return true;
  return false;
}

void check_surd(long long D, long long c, const std::string& spec) {
  if (D <= 0) throw DomainError("alpha component '" + spec + "': D must be positive");
  if (is_square(D)) throw DomainError("alpha component '" + spec + "': D is a perfect square");
  if (c == 0) throw UsageError("alpha component '" + spec + "': zero denominator");
}

AlphaComponent parse_component(const std::string& piece) {
  AlphaComponent comp;
  static const std::regex sqrt_re(R"(^sqrt(\d+)$)");
  static const std::regex surd_re(R"(^\((-?\d+)([+-]\d+)\*sqrt\((\d+)\)\)/(-?\d+)$)");
  static const std::regex dec_re(R"(^dec:(-?\d+(\.\d+)?)$)");
  std::smatch m;
  if (piece == "golden") {
    comp.a = 1; comp.b = 1; comp.c = 2; comp.D = 5;
    return comp;
  }
  if (std::regex_match(piece, m, sqrt_re)) {
    comp.a = 0; comp.b = 1; comp.c = 1;
    comp.D = std::stoll(m[1].str());
    check_surd(comp.D, comp.c, piece);
    return comp;
  }
  if (std::regex_match(piece, m, surd_re)) {
    comp.a = std::stoll(m[1].str());
    comp.b = std::stoll(m[2].str());
    comp.D = std::stoll(m[3].str());
    comp.c = std::stoll(m[4].str());
    check_surd(comp.D, comp.c, piece);
    return comp;
  }
  if (std::regex_match(piece, m, dec_re)) {
    comp.kind = AlphaComponent::Kind::decimal;
    comp.digits = m[1].str();
    return comp;
  }
  throw UsageError("cannot parse alpha component '" + piece + "'");
}

}  // namespace

Real AlphaComponent::render(unsigned bits) const {
  PrecisionGuard guard(bits + 32);
  Real v;
  if (kind == Kind::decimal) {
    v = Real(digits);
  } else {
    v = (Real(a) + Real(b) * sqrt(Real(D))) / Real(c);
  }
  PrecisionGuard out(bits);
  return Real(v);
}

std::vector<Real> RealVector::render(unsigned bits) const {
  std::vector<Real> out;
  out.reserve(comps.size());
  for (const auto& c : comps) out.push_back(c.render(bits));
  return out;
}

RealVector parse_alpha(const std::string& spec) {
  RealVector v;
  v.spec_string = spec;
  std::string cur;
  std::vector<std::string> pieces;
  for (char ch : spec) {
    if (ch == ',') {
      pieces.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur.push_back(ch);
    }
  }
  pieces.push_back(cur);
  if (pieces.size() == 1 && pieces[0].empty())
    throw UsageError("empty alpha specification");
  for (const auto& p : pieces) {
    if (p.empty()) throw UsageError("empty alpha component in '" + spec + "'");
    v.comps.push_back(parse_component(p));
  }
  return v;
}

RealVector alpha_sqrt(long long D) { return parse_alpha("sqrt" + std::to_string(D)); }

RealVector alpha_golden() { return parse_alpha("golden"); }

}  // namespace kron
