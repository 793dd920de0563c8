// Sample one G(n, p) graph, rescale its normalized adjacency spectrum and
// report how far it sits from the semicircle law.
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "speclaw/speclaw.hpp"

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 1000;
  const double np = argc > 2 ? std::strtod(argv[2], nullptr) : std::log(double(n)) * std::log(double(n));
  const double p = np / static_cast<double>(n);

  const speclaw::SeedPath seed{2024, 0, 0};
  const speclaw::GraphSample g = speclaw::sample_er({n, p}, seed);
  const auto m = speclaw::build(g, speclaw::MatrixKind::TheoremScaled, speclaw::ModelContext::er(p));
  const speclaw::SpectralMeasure s = speclaw::eigvals_sym(m);
  const speclaw::DistanceReport d = speclaw::distance_to_semicircle(s);

  std::printf("n=%zu p=%.6g edges=%zu isolated=%zu\n", n, p, g.edge_count(), g.isolated_count());
  std::printf("ks=%.6f w1=%.6f\n", d.ks, d.w1);
  return 0;
}
