#include "neusoc/rng.hpp"

#include <cmath>

namespace neusoc {

double Rng::exponential(double rate) {
    return -std::log1p(-uniform()) / rate;
}

}  // namespace neusoc
