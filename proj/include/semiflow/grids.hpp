#pragma once

#include <complex>
#include <vector>

namespace semiflow::grids {

using Complex = std::complex<double>;

// n points on the circle |z| = r.
std::vector<Complex> ring(int n, double r);

// n_total points split over two circles |z| = r1 and |z| = r2.
std::vector<Complex> ring_pair(int n_total, double r1, double r2);

}  // namespace semiflow::grids
