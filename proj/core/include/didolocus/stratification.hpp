/// Genericity strata of a metric germ from the roots of
///   Ptilde(z) = mu z^4 + nu z^3 + conj(nu) z + conj(mu)   and   T(z) = r3 z^3 + conj(r3)
/// on the unit circle, and the defining expressions of the bad sets B0..B6.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "didolocus/asymptotics.hpp"
#include "didolocus/metric_model.hpp"

namespace didolocus {

inline constexpr double kCircleTol = 1e-8;
inline constexpr double kClusterTol = 1e-7;
/// Relative threshold below which a bad-set expression counts as vanishing.
inline constexpr double kBadSetTol = 1e-9;

struct PolyRoot {
    cplx z;
    int multiplicity = 1;
    bool on_unit_circle = false;
};

struct RootReport {
    std::vector<PolyRoot> roots;
    std::vector<cplx> common_roots_with_T;
    int degree = 0;

    int circle_root_count() const;  // with multiplicity
};

/// All roots of a polynomial given by ascending coefficients, from the eigenvalues of
/// its companion matrix. Leading zero coefficients are dropped.
std::vector<cplx> polynomial_roots(const std::vector<cplx>& ascending);

cplx poly_eval(const std::vector<cplx>& ascending, cplx z);

/// Roots clustered into multiplicities and flagged for unit-circle membership.
/// Error: "identically zero".
RootReport circle_roots(const std::vector<cplx>& ascending, double circle_tol = kCircleTol,
                        double cluster_tol = kClusterTol);

/// Largest distance from a root to the nearest root of the reflected set z -> 1/conj(z).
double self_inversive_defect(const RootReport& r);

/// Sylvester resultant of two polynomials given by ascending coefficients.
cplx sylvester_resultant(const std::vector<cplx>& p, const std::vector<cplx>& q);

struct BadSetValue {
    std::string name;
    cplx value;
    double magnitude = 0;
    /// |value| divided by the natural magnitude of the expression's terms.
    double relative = 0;
    bool vanishes = false;
};

/// B0: r3, B1: mu, B2..B6 as the literal defining expressions (B6 by Sylvester determinant).
std::vector<BadSetValue> bad_set_values(const Invariants& inv, FormulaSet set = FormulaSet::Printed);

enum class Stratum { OffC, GenericOnC, IsolatedTypeA, IsolatedTypeB, NonGeneric };

const char* to_string(Stratum s);

struct StratumReport {
    Stratum stratum = Stratum::NonGeneric;
    std::vector<std::string> flags;  // violated bad sets for NonGeneric
    RootReport ptilde;
    RootReport t;
    std::vector<cplx> common_roots;
    std::vector<BadSetValue> b_values;
};

StratumReport classify(const Invariants& inv, FormulaSet set = FormulaSet::Printed);

std::string stratum_json(const StratumReport& r);

/// One-parameter family sweep. A crossing of C is reported where |r2| has a sharp
/// local minimum below kStratTol, located by bisection on |r2|^2.
struct SweepSample {
    double lambda;
    double abs_r2;
    Stratum stratum;
};

struct SweepResult {
    std::vector<SweepSample> samples;
    std::vector<double> c_crossings;
    std::vector<Stratum> crossing_strata;
};

SweepResult sweep_family(const std::function<BetaJet(double)>& family, double lambda0, double lambda1, int steps);

}  // namespace didolocus
