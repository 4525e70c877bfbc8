#include "osc/phase_geometry.hpp"

#include <cmath>

namespace osc {

namespace {

void support_conditions(MembershipReport& r, const PhasePoint<double>& p, double tau, double c_star, Branch b)
{
    r.require("|xi| <= C*", std::abs(p.xi) <= c_star);
    r.require("|eta| <= C*", std::abs(p.eta) <= c_star);
    r.require("tau <= w <= C*", tau <= p.w && p.w <= c_star);
    const double delta = discriminant(p);
    r.require("Delta >= tau", delta >= tau);
    bool root_ok = false;
    if (delta >= 0.0 && p.w != 0.0) {
        const double t = branch_root(p, b);
        root_ok = 0.25 <= t && t <= 4.0;
    }
    r.require("1/4 <= t_b <= 4", root_ok);
}

}  // namespace

MembershipReport amplitude_class_check(const AmplitudeClassSpec& spec, const PhasePoint<double>& p)
{
    if (!(spec.tau > 0.0 && spec.tau <= 1.0)) throw std::invalid_argument("amplitude_class_check: tau not in (0,1]");
    if (!(spec.sigma > 0.0 && spec.sigma <= 1.0)) throw std::invalid_argument("amplitude_class_check: sigma not in (0,1]");
    if (!(spec.c_star >= 4.0)) throw std::invalid_argument("amplitude_class_check: C* < 4");

    MembershipReport r;
    const double cs = spec.c_star;
    switch (spec.class_kind) {
    case AmplitudeClass::A_pm:
        support_conditions(r, p, spec.tau, cs, spec.branch);
        break;
    case AmplitudeClass::N_pm:
        support_conditions(r, p, spec.tau, cs, spec.branch);
        r.require("|xi| >= sigma", std::abs(p.xi) >= spec.sigma);
        break;
    case AmplitudeClass::E_pm:
        support_conditions(r, p, 1.0 / cs, cs, spec.branch);
        r.require("|xi| <= sigma", std::abs(p.xi) <= spec.sigma);
        break;
    case AmplitudeClass::B: {
        r.require("|xi| <= C*", std::abs(p.xi) <= cs);
        r.require("|eta| <= C*", std::abs(p.eta) <= cs);
        r.require("tau <= w <= C*", spec.tau <= p.w && p.w <= cs);
        r.require("|Delta| >= tau", std::abs(discriminant(p)) >= spec.tau);
        if (spec.tau < 1.0 / cs) r.require("|xi| > 1/C*", std::abs(p.xi) > 1.0 / cs);
        break;
    }
    }
    return r;
}

}  // namespace osc
