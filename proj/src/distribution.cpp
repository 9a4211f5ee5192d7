#include "qri/distribution.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "qri/error.hpp"
#include "qri/normal.hpp"
#include "qri/special.hpp"

namespace qri {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0)) {
        throw Error("InvalidParameter",
                    std::string(what) + " must be positive, got " + std::to_string(v));
    }
}

void check_p(double p, bool allow_zero) {
    const bool ok = allow_zero ? (p >= 0.0 && p < 1.0) : (p > 0.0 && p < 1.0);
    if (!ok) {
        throw Error("ProbabilityOutOfRange", "p=" + std::to_string(p) + " outside [0,1)");
    }
}

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

double beta_quantile_lower(double a, double b, double p) {
    auto f = [a, b](double x) { return beta_inc(a, b, x); };
    auto fp = [a, b](double x) {
        if (x <= 0.0 || x >= 1.0) return 0.0;
        return std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                        (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x));
    };
    return invert_monotone_cdf(f, fp, p, 0.0, 1.0);
}

}  // namespace

DistributionSpec DistributionSpec::lognormal(double mu, double sigma) {
    require_positive(sigma, "lognormal sigma");
    return {Family::Lognormal, mu, sigma};
}

DistributionSpec DistributionSpec::beta(double alpha, double beta) {
    require_positive(alpha, "beta alpha");
    require_positive(beta, "beta beta");
    return {Family::Beta, alpha, beta};
}

DistributionSpec DistributionSpec::chi_square(double df) {
    require_positive(df, "chi-square df");
    return {Family::ChiSquare, df, 0.0};
}

DistributionSpec DistributionSpec::pareto2(double shape, double scale) {
    require_positive(shape, "pareto2 shape");
    require_positive(scale, "pareto2 scale");
    return {Family::ParetoII, shape, scale};
}

DistributionSpec DistributionSpec::exponential(double rate) {
    require_positive(rate, "exponential rate");
    return {Family::Exponential, rate, 0.0};
}

DistributionSpec DistributionSpec::weibull(double shape) {
    require_positive(shape, "weibull shape");
    return {Family::Weibull, shape, 0.0};
}

DistributionSpec DistributionSpec::lognormal_frechet(double sigma, double tail_shape) {
    require_positive(sigma, "lnfrechet sigma");
    require_positive(tail_shape, "lnfrechet tail shape");
    return {Family::LognormalFrechet, sigma, tail_shape};
}

std::string DistributionSpec::label() const {
    switch (family) {
        case Family::Lognormal: return "lognormal:" + num(p1) + "," + num(p2);
        case Family::Beta: return "beta:" + num(p1) + "," + num(p2);
        case Family::ChiSquare: return "chisq:" + num(p1);
        case Family::ParetoII: return "pareto2:" + num(p1) + "," + num(p2);
        case Family::Exponential: return "exp:" + num(p1);
        case Family::Weibull: return "weibull:" + num(p1);
        case Family::LognormalFrechet: return "lnfrechet:" + num(p1) + "," + num(p2);
    }
    return "?";
}

DistributionSpec parse_distribution(std::string_view literal) {
    const auto colon = literal.find(':');
    const std::string name(literal.substr(0, colon));
    std::vector<double> args;
    if (colon != std::string_view::npos) {
        std::string rest(literal.substr(colon + 1));
        std::istringstream is(rest);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            try {
                std::size_t used = 0;
                const double v = std::stod(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
                args.push_back(v);
            } catch (const std::exception&) {
                throw Error("BadDistributionLiteral", "cannot parse number '" + tok + "'");
            }
        }
    }
    auto want = [&](std::size_t k) {
        if (args.size() != k) {
            throw Error("BadDistributionLiteral",
                        name + " takes " + std::to_string(k) + " parameter(s)");
        }
    };
    if (name == "lognormal") { want(2); return DistributionSpec::lognormal(args[0], args[1]); }
    if (name == "beta")      { want(2); return DistributionSpec::beta(args[0], args[1]); }
    if (name == "chisq")     { want(1); return DistributionSpec::chi_square(args[0]); }
    if (name == "pareto2")   { want(2); return DistributionSpec::pareto2(args[0], args[1]); }
    if (name == "exp")       { want(1); return DistributionSpec::exponential(args[0]); }
    if (name == "weibull")   { want(1); return DistributionSpec::weibull(args[0]); }
    if (name == "lnfrechet") { want(2); return DistributionSpec::lognormal_frechet(args[0], args[1]); }
    throw Error("BadDistributionLiteral", "unknown family '" + name + "'");
}

double quantile(const DistributionSpec& d, double p) {
    check_p(p, /*allow_zero=*/true);
    switch (d.family) {
        case Family::Lognormal:
            if (p == 0.0) return 0.0;
            return std::exp(d.p1 + normal_quantile(p) * d.p2);
        case Family::ParetoII:
            return d.p2 * (std::pow(1.0 - p, -1.0 / d.p1) - 1.0);
        case Family::Exponential:
            return -std::log1p(-p) / d.p1;
        case Family::Weibull:
            return std::pow(-std::log1p(-p), 1.0 / d.p1);
        case Family::Beta:
            if (p == 0.0) return 0.0;
            // solve in whichever tail keeps the root away from a steep edge
            if (p > 0.5) return 1.0 - beta_quantile_lower(d.p2, d.p1, 1.0 - p);
            return beta_quantile_lower(d.p1, d.p2, p);
        case Family::ChiSquare: {
            if (p == 0.0) return 0.0;
            const double s = 0.5 * d.p1;
            auto f = [s](double x) { return gamma_p(s, 0.5 * x); };
            auto fp = [s](double x) {
                if (x <= 0.0) return 0.0;
                return std::exp((s - 1.0) * std::log(0.5 * x) - 0.5 * x - std::lgamma(s)) * 0.5;
            };
            double hi = 2.0 * s + 10.0;
            while (f(hi) < p) {
                hi *= 2.0;
                if (hi > 1e300) throw Error("InversionFailure", "chi-square bracket overflow");
            }
            return invert_monotone_cdf(f, fp, p, 0.0, hi);
        }
        case Family::LognormalFrechet: {
            if (p == 0.0) return 0.0;
            if (p <= 0.5) return std::exp(d.p1 * normal_quantile(p));
            // Frechet tail scaled so Q is continuous (= 1) at the median.
            return std::pow(std::log(2.0), 1.0 / d.p2) * std::pow(-std::log(p), -1.0 / d.p2);
        }
    }
    throw Error("ProbabilityOutOfRange", "unreachable family");
}

double cdf(const DistributionSpec& d, double x) {
    switch (d.family) {
        case Family::Lognormal:
            if (x <= 0.0) return 0.0;
            return normal_cdf((std::log(x) - d.p1) / d.p2);
        case Family::ParetoII:
            if (x <= 0.0) return 0.0;
            return 1.0 - std::pow(1.0 + x / d.p2, -d.p1);
        case Family::Exponential:
            if (x <= 0.0) return 0.0;
            return -std::expm1(-d.p1 * x);
        case Family::Weibull:
            if (x <= 0.0) return 0.0;
            return -std::expm1(-std::pow(x, d.p1));
        case Family::Beta:
            return beta_inc(d.p1, d.p2, x);
        case Family::ChiSquare:
            if (x <= 0.0) return 0.0;
            return gamma_p(0.5 * d.p1, 0.5 * x);
        case Family::LognormalFrechet:
            if (x <= 0.0) return 0.0;
            if (x <= 1.0) return normal_cdf(std::log(x) / d.p1);
            return std::exp(-std::log(2.0) * std::pow(x, -d.p2));
    }
    return 0.0;
}

std::vector<double> sample(const DistributionSpec& d, std::size_t n, SeededRng& rng) {
    if (n == 0) throw Error("InvalidParameter", "sample size must be >= 1");
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(quantile(d, rng.next_double()));
    }
    return out;
}

double lognormal_partial_integral(double sigma, double r) {
    require_positive(sigma, "sigma");
    if (!(r > 0.0 && r <= 1.0)) {
        throw Error("ProbabilityOutOfRange", "r=" + std::to_string(r) + " outside (0,1]");
    }
    return 2.0 * std::exp(2.0 * sigma * sigma) * normal_cdf(normal_quantile(r / 2.0) - 2.0 * sigma);
}

double lognormal_I(double sigma) {
    require_positive(sigma, "sigma");
    return 1.0 - 2.0 * std::exp(2.0 * sigma * sigma) * normal_cdf(-2.0 * sigma);
}

std::vector<double> lognormal_Ik(double sigma, const SymmetricPartition& partition) {
    require_positive(sigma, "sigma");
    const double scale = 2.0 * std::exp(2.0 * sigma * sigma);
    std::vector<double> out;
    out.reserve(partition.members());
    for (std::size_t k = 0; k < partition.members(); ++k) {
        const double a = partition.lower(k);
        const double b = partition.upper(k);
        const double lo = a > 0.0 ? normal_cdf(normal_quantile(a) - 2.0 * sigma) : 0.0;
        const double hi = normal_cdf(normal_quantile(b) - 2.0 * sigma);
        out.push_back(1.0 - scale * (hi - lo) / partition.weights[k]);
    }
    return out;
}

}  // namespace qri
