#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "ttr/curve.hpp"
#include "ttr/periods.hpp"

namespace ttr {

enum class Variant { Ordinary, HitchinGlobal, Twisted };
enum class GenusMode { ExactGenus0, Elliptic };

const char* variant_name(Variant v);
Variant parse_variant(const std::string& s);

// Values are per unit d(coord) in each slot: coord is z on parametric
// curves and x on hyperelliptic ones.
struct Bidifferential {
  std::function<cplx(const CurvePoint&, const CurvePoint&)> eval;
  std::vector<cplx> b_divisor;  // coords of twist-zero preimages
  GenusMode mode = GenusMode::ExactGenus0;
  cplx operator()(const CurvePoint& p, const CurvePoint& q) const { return eval(p, q); }
};

// Genus 0: dz1 dz2 / (z1 - z2)^2. Genus 1: (p(u1 - u2) + c) du1 du2.
Bidifferential bergman(const SpectralCurve& c, std::shared_ptr<const Uniformization> uni = nullptr);
Bidifferential symmetrize_b(const SpectralCurve& c, const Bidifferential& B);

// Normalized third-kind differential omega^{a-b}(z), per unit d(coord).
struct CauchyKernel {
  std::function<cplx(const CurvePoint&)> eval;
  CurvePoint a, b;
  cplx operator()(const CurvePoint& z) const { return eval(z); }
};
CauchyKernel cauchy_kernel(const SpectralCurve& c, const CurvePoint& a, const CurvePoint& b,
                           std::shared_ptr<const Uniformization> uni = nullptr);

// A point near a ramification point r, in the local coordinate t of
// ram_frame, together with its involution image.
struct LocalNode {
  cplx t;
  CurvePoint q, sq;
  cplx dcoord_dt;  // d(coord)/dt at q
  cplx sigma_jac;  // d(coord at sq) / d(coord at q)
};

// Curve-specific evaluation used by the numeric recursion.
class EvalGeometry {
 public:
  explicit EvalGeometry(SpectralCurve c) : curve_(std::move(c)) {}
  virtual ~EvalGeometry() = default;

  const SpectralCurve& curve() const { return curve_; }
  const std::vector<RamPoint>& ram() const { return curve_.ramification_points(); }
  virtual GenusMode mode() const = 0;

  virtual CurvePoint prepare(CurvePoint p) const { return p; }
  virtual cplx bergman(const CurvePoint& p, const CurvePoint& q) const = 0;
  // Integral of B(., p0) from sq to q along the local path through r, per d(coord at p0).
  virtual cplx numerator(const CurvePoint& p0, const LocalNode& n, const RamPoint& r) const = 0;
  virtual LocalNode node(const RamPoint& r, cplx t) const = 0;
  // Radius (in t) of the largest disc around r free of other special points.
  virtual double local_scale(const RamPoint& r) const = 0;
  // |t| of the point p seen from r.
  virtual double local_distance(const RamPoint& r, const CurvePoint& p) const = 0;

  cplx ydx(const CurvePoint& p) const;   // y dx per d(coord)
  cplx dxdy(const CurvePoint& p) const;  // dx dy per d(coord)^2
  cplx s_at(const CurvePoint& p) const { return curve_.s_of(p); }

 private:
  SpectralCurve curve_;
};

class ParametricGeometry final : public EvalGeometry {
 public:
  explicit ParametricGeometry(SpectralCurve c);
  GenusMode mode() const override { return GenusMode::ExactGenus0; }
  cplx bergman(const CurvePoint& p, const CurvePoint& q) const override;
  cplx numerator(const CurvePoint& p0, const LocalNode& n, const RamPoint& r) const override;
  LocalNode node(const RamPoint& r, cplx t) const override;
  double local_scale(const RamPoint& r) const override;
  double local_distance(const RamPoint& r, const CurvePoint& p) const override;
  cplx sigma(const RamPoint& r, cplx z) const;  // local involution by Newton refinement

 private:
  std::vector<double> scale_;
};

class EllipticGeometry final : public EvalGeometry {
 public:
  EllipticGeometry(SpectralCurve c, std::shared_ptr<const Uniformization> uni);
  GenusMode mode() const override { return GenusMode::Elliptic; }
  CurvePoint prepare(CurvePoint p) const override;
  cplx bergman(const CurvePoint& p, const CurvePoint& q) const override;
  cplx numerator(const CurvePoint& p0, const LocalNode& n, const RamPoint& r) const override;
  LocalNode node(const RamPoint& r, cplx t) const override;
  double local_scale(const RamPoint& r) const override;
  double local_distance(const RamPoint& r, const CurvePoint& p) const override;
  const Uniformization& uniformization() const { return *uni_; }

 private:
  std::shared_ptr<const Uniformization> uni_;
  std::vector<LocalFrame> frames_;
  std::vector<double> scale_;
};

std::shared_ptr<EvalGeometry> make_geometry(const SpectralCurve& c, std::shared_ptr<const Uniformization> uni = nullptr);

struct KernelSpec {
  Variant variant = Variant::Ordinary;
  std::function<cplx(cplx)> w01_multiplier;  // HitchinGlobal: W01 = m(x) y dx (default m = 1)
  std::optional<cplx> base_point;            // fixed alpha (genus 0 only); default is sigma(z)
};

// K_r(z0, z) = [integral of B(., z0)] / Omega(z).
class RecursionKernel {
 public:
  RecursionKernel(std::shared_ptr<const EvalGeometry> geo, const RamPoint& r, KernelSpec spec);

  cplx omega(const LocalNode& n) const;  // per d(coord at q)
  cplx value(const CurvePoint& p0, const LocalNode& n) const;
  // Laurent coefficients lo..hi in t (units dt^-1), by trapezoidal sampling on |t| = radius.
  SeriesC laurent(const CurvePoint& p0, int lo, int hi, double radius, int nodes = 128) const;

  const RamPoint& ram_point() const { return r_; }

 private:
  std::shared_ptr<const EvalGeometry> geo_;
  RamPoint r_;
  KernelSpec spec_;
};

// Periods of B(., z) on a genus-1 curve over the cycles carried by uni, with
// quadrature rules adapted to the pole at z.
struct BergmanPeriods {
  cplx a_period, b_period, expected_b;  // expected_b = 2 pi i v(z)
};
BergmanPeriods bergman_periods(const SpectralCurve& c, std::shared_ptr<const Uniformization> uni, const CurvePoint& z);

// Residues of the Cauchy kernel at a and b (expected +1 and -1), by the
// trapezoid rule on circles in x of the given radius on the sheets of a and b.
std::pair<cplx, cplx> cauchy_residues(const SpectralCurve& c, const CurvePoint& a, const CurvePoint& b,
                                      std::shared_ptr<const Uniformization> uni, double radius, int nodes = 64);

// W01 per d(coord) for the variant.
cplx w01_value(const EvalGeometry& g, const CurvePoint& p, const KernelSpec& spec);

}  // namespace ttr
