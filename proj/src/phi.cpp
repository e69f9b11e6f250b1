#include "gapfield/phi.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gapfield {

namespace {
double ipow(double x, int p) {
    double v = 1.0;
    for (int i = 0; i < p; ++i) v *= x;
    return v;
}
}  // namespace

double PhiSpec::value(Vec2 p) const {
    double v = 0.0;
    for (const auto& t : terms) v += t.c * ipow(p.x, t.p1) * ipow(p.y, t.pn);
    return v;
}

Vec2 PhiSpec::gradient(Vec2 p) const {
    Vec2 g{0.0, 0.0};
    for (const auto& t : terms) {
        if (t.p1 > 0) g.x += t.c * t.p1 * ipow(p.x, t.p1 - 1) * ipow(p.y, t.pn);
        if (t.pn > 0) g.y += t.c * t.pn * ipow(p.x, t.p1) * ipow(p.y, t.pn - 1);
    }
    return g;
}

Mat2 PhiSpec::hessian(Vec2 p) const {
    Mat2 h{0.0, 0.0, 0.0};
    for (const auto& t : terms) {
        if (t.p1 > 1) h.a11 += t.c * t.p1 * (t.p1 - 1) * ipow(p.x, t.p1 - 2) * ipow(p.y, t.pn);
        if (t.p1 > 0 && t.pn > 0)
            h.a12 += t.c * t.p1 * t.pn * ipow(p.x, t.p1 - 1) * ipow(p.y, t.pn - 1);
        if (t.pn > 1) h.a22 += t.c * t.pn * (t.pn - 1) * ipow(p.x, t.p1) * ipow(p.y, t.pn - 2);
    }
    return h;
}

PhiSpec phi_constant(double c) {
    PhiSpec s;
    s.terms = {{c, 0, 0}};
    s.name = "constant";
    return s;
}

PhiSpec phi_linear_xn() {
    PhiSpec s;
    s.terms = {{1.0, 0, 1}};
    s.name = "linear-xn";
    return s;
}

PhiSpec phi_quadratic() {
    PhiSpec s;
    s.terms = {{1.0, 0, 2}};
    s.name = "quadratic";
    return s;
}

PhiSpec phi_scaled(const PhiSpec& base, double factor) {
    PhiSpec s = base;
    for (auto& t : s.terms) t.c *= factor;
    s.name = base.name + "-scaled";
    return s;
}

PhiSpec phi_shifted(const PhiSpec& base, double constant) {
    PhiSpec s = base;
    s.terms.push_back({constant, 0, 0});
    s.name = base.name + "-shifted";
    return s;
}

namespace {

// one term: coefficient with optional *x1^a and *xn^b factors
PhiMonomial parse_term(const std::string& term) {
    PhiMonomial mono;
    std::string t;
    for (char c : term)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.empty()) throw std::invalid_argument("phi expression: empty term");

    std::size_t pos = 0;
    // leading coefficient (optional, defaults to 1 or -1)
    if (t[pos] == 'x') {
        mono.c = 1.0;
    } else if (t[pos] == '-' && pos + 1 < t.size() && t[pos + 1] == 'x') {
        mono.c = -1.0;
        ++pos;
    } else {
        std::size_t used = 0;
        mono.c = std::stod(t.substr(pos), &used);
        pos += used;
        if (pos < t.size() && t[pos] == '*') ++pos;
    }
    while (pos < t.size()) {
        if (t.compare(pos, 2, "x1") == 0 || t.compare(pos, 2, "xn") == 0) {
            const bool is_x1 = t[pos + 1] == '1';
            pos += 2;
            int p = 1;
            if (pos < t.size() && t[pos] == '^') {
                ++pos;
                std::size_t used = 0;
                p = std::stoi(t.substr(pos), &used);
                pos += used;
            }
            if (p < 0) throw std::invalid_argument("phi expression: negative power");
            (is_x1 ? mono.p1 : mono.pn) += p;
            if (pos < t.size() && t[pos] == '*') ++pos;
        } else {
            throw std::invalid_argument("phi expression: unexpected token in '" + term + "'");
        }
    }
    return mono;
}

}  // namespace

PhiSpec parse_phi_expression(const std::string& text) {
    PhiSpec spec;
    spec.name = "poly";
    // split on '+' at top level (terms carry their own leading '-')
    std::string body = text;
    std::vector<std::string> parts;
    std::string cur;
    for (char c : body) {
        if (c == '+') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    for (const auto& part : parts) {
        bool blank = true;
        for (char c : part)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (blank) continue;
        spec.terms.push_back(parse_term(part));
    }
    if (spec.terms.empty()) throw std::invalid_argument("phi expression: no terms");
    return spec;
}

PhiSpec make_phi(const std::string& spec) {
    if (spec == "constant") return phi_constant(1.0);
    if (spec == "linear-xn") return phi_linear_xn();
    if (spec == "quadratic") return phi_quadratic();
    if (spec.rfind("poly:", 0) == 0) return parse_phi_expression(spec.substr(5));
    throw std::invalid_argument("unknown phi spec '" + spec + "'");
}

}  // namespace gapfield
