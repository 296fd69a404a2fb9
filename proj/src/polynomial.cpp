#include "selfsim/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace selfsim {

RationalPoly::RationalPoly(Rational constant) {
    coeffs_.push_back(std::move(constant));
    trim();
}

RationalPoly::RationalPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

RationalPoly::RationalPoly(std::initializer_list<Rational> coeffs) : coeffs_(coeffs) { trim(); }

RationalPoly RationalPoly::variable() {
    return RationalPoly{Rational(0), Rational(1)};
}

void RationalPoly::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational RationalPoly::coefficient(size_t k) const {
    return k < coeffs_.size() ? coeffs_[k] : Rational(0);
}

Rational RationalPoly::evaluate(const Rational& u) const {
    Rational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * u + *it;
    return acc;
}

double RationalPoly::evaluate(double u) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * u + to_double(*it);
    return acc;
}

RationalPoly RationalPoly::derivative() const {
    if (coeffs_.size() <= 1) return RationalPoly();
    std::vector<Rational> out(coeffs_.size() - 1);
    for (size_t k = 1; k < coeffs_.size(); ++k) out[k - 1] = coeffs_[k] * Rational(static_cast<long>(k));
    return RationalPoly(std::move(out));
}

Rational RationalPoly::abs_bound(const Rational& lo, const Rational& hi) const {
    Rational radius = std::max(rational_abs(lo), rational_abs(hi));
    Rational acc(0), pw(1);
    for (const auto& c : coeffs_) {
        acc += rational_abs(c) * pw;
        pw *= radius;
    }
    return acc;
}

RationalPoly RationalPoly::operator+(const RationalPoly& o) const {
    std::vector<Rational> out(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
    for (size_t k = 0; k < coeffs_.size(); ++k) out[k] += coeffs_[k];
    for (size_t k = 0; k < o.coeffs_.size(); ++k) out[k] += o.coeffs_[k];
    return RationalPoly(std::move(out));
}

RationalPoly RationalPoly::operator-(const RationalPoly& o) const { return *this + (-o); }

RationalPoly RationalPoly::operator-() const {
    std::vector<Rational> out(coeffs_);
    for (auto& c : out) c = -c;
    return RationalPoly(std::move(out));
}

RationalPoly RationalPoly::operator*(const RationalPoly& o) const {
    if (is_zero() || o.is_zero()) return RationalPoly();
    std::vector<Rational> out(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < o.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
    return RationalPoly(std::move(out));
}

RationalPoly RationalPoly::operator*(const Rational& s) const {
    std::vector<Rational> out(coeffs_);
    for (auto& c : out) c *= s;
    return RationalPoly(std::move(out));
}

std::string RationalPoly::to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    for (size_t k = 0; k < coeffs_.size(); ++k) {
        if (k) os << ", ";
        os << coeffs_[k].get_str();
    }
    return os.str();
}

RationalPoly RationalPoly::parse(std::string_view text) {
    std::vector<Rational> coeffs;
    std::string item;
    std::istringstream is{std::string(text)};
    while (std::getline(is, item, ',')) {
        size_t a = item.find_first_not_of(" \t");
        if (a == std::string::npos) throw std::invalid_argument("empty coefficient in polynomial");
        size_t b = item.find_last_not_of(" \t");
        coeffs.push_back(parse_rational(item.substr(a, b - a + 1)));
    }
    return RationalPoly(std::move(coeffs));
}

int rational_rank(std::vector<std::vector<Rational>> rows) {
    if (rows.empty()) return 0;
    const size_t ncols = rows[0].size();
    size_t pivot_row = 0;
    for (size_t col = 0; col < ncols && pivot_row < rows.size(); ++col) {
        size_t sel = pivot_row;
        while (sel < rows.size() && rows[sel][col] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[pivot_row], rows[sel]);
        const Rational inv_pivot = Rational(1) / rows[pivot_row][col];
        for (size_t r = pivot_row + 1; r < rows.size(); ++r) {
            if (rows[r][col] == 0) continue;
            Rational factor = rows[r][col] * inv_pivot;
            for (size_t c = col; c < ncols; ++c) {
                Rational t = factor * rows[pivot_row][c];
                rows[r][c] -= t;
            }
        }
        ++pivot_row;
    }
    return static_cast<int>(pivot_row);
}

RationalPoly shift_variable(const RationalPoly& p, const Rational& shift) {
    // Horner in (v + shift).
    RationalPoly acc;
    RationalPoly lin{shift, Rational(1)};
    const auto& c = p.coefficients();
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * lin + RationalPoly(*it);
    return acc;
}

}  // namespace selfsim
