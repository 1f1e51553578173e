#include "mpoc/sampling.hpp"

#include <sstream>

namespace mpoc {

namespace {
const unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
}

double radical_inverse(unsigned long long index, unsigned base) {
    double result = 0.0;
    double frac = 1.0 / base;
    while (index > 0) {
        result += static_cast<double>(index % base) * frac;
        index /= base;
        frac /= base;
    }
    return result;
}

Vector halton_point(unsigned long long index, const Box& box) {
    const int n = box.dim();
    if (n > static_cast<int>(sizeof(kPrimes) / sizeof(kPrimes[0])))
        throw DomainError("halton_point: dimension exceeds prime table");
    Vector x(n);
    for (int i = 0; i < n; ++i) {
        const double u = radical_inverse(index, kPrimes[i]);
        x(i) = box.lower(i) + u * (box.upper(i) - box.lower(i));
    }
    return x;
}

std::vector<std::vector<int>> monomial_exponents(int n, int degree) {
    if (n < 1 || degree < 0)
        throw DomainError("monomial_exponents: need n >= 1, degree >= 0");
    std::vector<std::vector<int>> out;
    std::vector<int> current(n, 0);
    // Graded order: total degree ascending; within a degree, lexicographic
    // descending on the exponent tuple (x1-heavy terms first).
    for (int total = 0; total <= degree; ++total) {
        std::vector<int> e(n, 0);
        // Enumerate compositions of `total` into n parts, lex descending.
        auto rec = [&](auto&& self, int pos, int remaining) -> void {
            if (pos == n - 1) {
                e[pos] = remaining;
                out.push_back(e);
                return;
            }
            for (int v = remaining; v >= 0; --v) {
                e[pos] = v;
                self(self, pos + 1, remaining - v);
            }
            e[pos] = 0;
        };
        rec(rec, 0, total);
    }
    return out;
}

double eval_monomial(const std::vector<int>& exponents, const Vector& x) {
    if (static_cast<int>(exponents.size()) != x.size())
        throw DimensionError("eval_monomial: exponent/point length mismatch");
    double v = 1.0;
    for (int i = 0; i < x.size(); ++i)
        for (int k = 0; k < exponents[i]; ++k) v *= x(i);
    return v;
}

Matrix monomial_design(const std::vector<Vector>& points,
                       const std::vector<std::vector<int>>& basis) {
    Matrix D(points.size(), basis.size());
    for (std::size_t r = 0; r < points.size(); ++r)
        for (std::size_t c = 0; c < basis.size(); ++c)
            D(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                eval_monomial(basis[c], points[r]);
    return D;
}

}  // namespace mpoc
