#pragma once

#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <vector>

namespace hwk {

/// Per-step invariants of a run. `energy` is the kinetic energy for the
/// beam, the field energy for the guiding-center model and zero otherwise;
/// `tv` is only filled for 1D runs.
struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double tv = 0.0;
  double energy = 0.0;
  double min = 0.0;
  double max = 0.0;
  double rel_mass = 0.0;
  double rel_l1 = 0.0;
  double rel_l2 = 0.0;
  double rel_energy = 0.0;

  /// Fills the relative-error columns against the initial record.
  void relate_to(const DiagnosticsRecord& initial) {
    const auto rel = [](double now, double ref) {
      if (ref == 0.0) return now == 0.0 ? 0.0 : std::abs(now);
      return (now - ref) / std::abs(ref);
    };
    rel_mass = rel(mass, initial.mass);
    rel_l1 = rel(l1, initial.l1);
    rel_l2 = rel(l2, initial.l2);
    rel_energy = rel(energy, initial.energy);
  }
};

using StepHook = std::function<void(const DiagnosticsRecord&)>;

inline constexpr const char* kDiagnosticsHeader =
    "t,mass,l1,l2,tv,energy,min,max,rel_mass,rel_l1,rel_l2,rel_energy";

inline void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r) {
  os << std::setprecision(17) << r.t << ',' << r.mass << ',' << r.l1 << ',' << r.l2 << ',' << r.tv << ','
     << r.energy << ',' << r.min << ',' << r.max << ',' << r.rel_mass << ',' << r.rel_l1 << ',' << r.rel_l2 << ','
     << r.rel_energy << '\n';
}

inline void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& rows) {
  os << kDiagnosticsHeader << '\n';
  for (const auto& r : rows) write_diagnostics_row(os, r);
}

}  // namespace hwk
