#include "abk/gamma.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace abk {

GammaSpec gamma_from_mean_sd(double mean, double sd) {
    if (!(mean > 0.0) || !(sd > 0.0))
        throw std::runtime_error("gamma_from_mean_sd: mean and sd must be positive");
    GammaSpec g;
    g.mean = mean;
    g.sd = sd;
    double ratio = mean / sd;
    g.shape = ratio * ratio;
    g.scale = sd * sd / mean;
    return g;
}

double GammaSpec::log_pdf(double x) const {
    if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
    return (shape - 1.0) * std::log(x) - x / scale - std::lgamma(shape) - shape * std::log(scale);
}

double GammaSpec::pdf(double x) const {
    if (!(x > 0.0)) return 0.0;
    return std::exp(log_pdf(x));
}

}  // namespace abk
