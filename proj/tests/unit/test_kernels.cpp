#include <gtest/gtest.h>

#include <random>

#include "nfsar/dictionary.hpp"
#include "nfsar/kernels.hpp"
#include "nfsar/simulate.hpp"
#include "oracles.hpp"

using namespace nfsar;

namespace {

ImagingGeometry odd_geometry() {
  ImagingGeometry g = ImagingGeometry::centered(6.0, 24, 20, 0.06, 0.05);
  g.validate();
  return g;
}

ComplexImage noise_image(const GridSpec& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  ComplexImage img(grid);
  for (auto& v : img.data()) v = {n(rng), n(rng)};
  return img;
}

}  // namespace

TEST(Kernels, AdjointMatchesDenseAtoms) {
  const ImagingGeometry g = odd_geometry();
  const PsfBank bank = build_psf_bank(g, {0.05, 0.02});
  const ComplexImage y = noise_image(g.grid, 1);
  ComplexImage out(g.grid);
  kernels::serial::adjoint(bank, y, out);
  for (std::size_t ia = 0; ia < g.grid.n_azimuth; ++ia)
    for (std::size_t ir = 0; ir < g.grid.n_range; ++ir) {
      const cplx ref = inner(oracle::dense_atom(bank, ia, ir), y);
      EXPECT_NEAR(std::abs(out(ia, ir) - ref), 0.0, 1e-12 * (1.0 + std::abs(ref)));
    }
}

TEST(Kernels, ApplyMatchesDenseAtoms) {
  const ImagingGeometry g = odd_geometry();
  const PsfBank bank = build_psf_bank(g, {0.05, 0.02});
  const ComplexImage x = noise_image(g.grid, 2);
  ComplexImage out(g.grid);
  kernels::serial::apply(bank, x, out);
  ComplexImage ref(g.grid);
  for (std::size_t ia = 0; ia < g.grid.n_azimuth; ++ia)
    for (std::size_t ir = 0; ir < g.grid.n_range; ++ir) {
      const ComplexImage atom = oracle::dense_atom(bank, ia, ir);
      for (std::size_t k = 0; k < ref.size(); ++k) ref[k] += x(ia, ir) * atom[k];
    }
  for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(std::abs(out[k] - ref[k]), 0.0, 1e-11);
}

TEST(Kernels, ParallelBitIdenticalToSerial) {
  const ImagingGeometry g = default_geometry(48);
  const PsfBank bank = build_psf_bank(g);
  const ComplexImage x = noise_image(g.grid, 3);
  ComplexImage a(g.grid), b(g.grid);
  kernels::serial::adjoint(bank, x, a);
  kernels::parallel::adjoint(bank, x, b);
  EXPECT_EQ(a.data(), b.data());
  kernels::serial::apply(bank, x, a);
  kernels::parallel::apply(bank, x, b);
  EXPECT_EQ(a.data(), b.data());
}

TEST(Kernels, ClippedNormMatchesDenseAtom) {
  const ImagingGeometry g = odd_geometry();
  const PsfBank bank = build_psf_bank(g);
  for (std::size_t ia : {0u, 5u, 23u})
    for (std::size_t ir : {0u, 10u, 19u}) {
      const double ref = oracle::dense_atom(bank, ia, ir).norm2();
      EXPECT_NEAR(kernels::clipped_norm2(bank.lookup(ia, ir), ia, ir, g.grid), ref, 1e-12 * ref);
    }
}

TEST(Dictionary, CorrelateDepositAreAdjoint) {
  const ImagingGeometry g = odd_geometry();
  const PsfBank bank = build_psf_bank(g);
  const VariantDictionary dict(bank);
  const ComplexImage y = noise_image(g.grid, 4);
  const cplx c{0.3, -1.2};
  for (std::size_t j : {0u, 77u, 479u}) {
    ComplexImage dep(g.grid);
    dict.deposit(j, c, dep);
    // <c d_j, y> = conj(c) <d_j, y>
    EXPECT_NEAR(std::abs(inner(dep, y) - std::conj(c) * dict.correlate(j, y)), 0.0, 1e-11);
    EXPECT_NEAR(dict.atom_norm2(j), oracle::dense_atom(bank, j / g.grid.n_range, j % g.grid.n_range).norm2(), 1e-12);
  }
}

TEST(Dictionary, GridMismatchThrows) {
  const PsfBank bank = build_psf_bank(default_geometry(16));
  const VariantDictionary dict(bank);
  EXPECT_THROW(dict.adjoint(ComplexImage(default_geometry(17).grid)), std::invalid_argument);
}
