#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "hwk/config.hpp"
#include "hwk/io.hpp"
#include "hwk/models.hpp"
#include "hwk/report.hpp"

namespace hwk {

struct RunOutput {
  std::vector<std::string> files;
  std::vector<std::string> summary;
};

using LogFn = std::function<void(const std::string&)>;

namespace detail {

inline std::string format_time(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

inline std::string run_stem(const RunConfig& c) {
  std::string s = std::string(to_string(c.experiment)) + "_" + std::string(to_string(c.scheme));
  if (c.experiment == Experiment::transport1d || c.experiment == Experiment::convergence)
    s += "_" + std::string(to_string(c.profile));
  if (c.experiment != Experiment::convergence) s += "_n" + std::to_string(c.n.front());
  return s;
}

inline std::ofstream open_out(const std::filesystem::path& p, RunOutput& out) {
  std::ofstream os(p);
  if (!os) throw IoError("cannot open " + p.string());
  out.files.push_back(p.string());
  return os;
}

inline void write_plot_script(const std::filesystem::path& p, const std::string& csv, RunOutput& out) {
  std::ofstream os = open_out(p, out);
  os << "import pandas as pd\nimport matplotlib.pyplot as plt\n\n"
     << "d = pd.read_csv('" << csv << "')\n"
     << "fig, ax = plt.subplots(2, 2, figsize=(9, 6))\n"
     << "for a, col in zip(ax.flat, ['rel_mass', 'rel_l2', 'min', 'energy']):\n"
     << "    a.plot(d['t'], d[col])\n    a.set_xlabel('t')\n    a.set_title(col)\n"
     << "fig.tight_layout()\nfig.savefig('" << p.stem().string() << ".png')\n";
}

}  // namespace detail

/// Runs one expanded job and writes its files under `c.output_dir`.
inline RunOutput execute_run(const RunConfig& c, const LogFn& log = {}) {
  namespace fs = std::filesystem;
  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  const std::string stem = detail::run_stem(c);
  const SchemeConfig cfg = c.scheme_config();
  RunOutput out;

  const auto snapshot_writer = [&](double t, const Field2D& f) {
    const fs::path p = dir / (stem + "_t" + detail::format_time(t));
    save_snapshot(p.string() + ".hwk", f);
    out.files.push_back(p.string() + ".hwk");
    if (c.snapshot_csv) {
      save_field_csv(p.string() + ".csv", f);
      out.files.push_back(p.string() + ".csv");
    }
  };

  switch (c.experiment) {
    case Experiment::transport1d: {
      Transport1DSetup s;
      s.profile = c.profile;
      s.velocity = c.velocity;
      s.t_end = c.t_end;
      s.fd_dt_exponent = c.fd_dt_exponent;
      std::ofstream ts = detail::open_out(dir / (stem + ".csv"), out);
      ts << kDiagnosticsHeader << '\n';
      const auto res = run_transport1d(s, c.scheme, c.n.front(), cfg, [&](const DiagnosticsRecord& r) {
        write_diagnostics_row(ts, r);
      });
      save_snapshot((dir / (stem + "_final.hwk")).string(), res.final_field);
      out.files.push_back((dir / (stem + "_final.hwk")).string());
      {
        std::ofstream fc = detail::open_out(dir / (stem + "_final.csv"), out);
        write_field_csv(fc, res.final_field);
      }
      char buf[160];
      std::snprintf(buf, sizeof buf, "n=%zu dt=%.6g steps=%zu L1 error=%.6e TV error=%.6e", c.n.front(), res.dt,
                    res.steps, res.l1_error, res.tv_error);
      out.summary.emplace_back(buf);
      break;
    }
    case Experiment::convergence: {
      Transport1DSetup s;
      s.profile = c.profile;
      s.velocity = c.velocity;
      s.t_end = c.t_end;
      s.fd_dt_exponent = c.fd_dt_exponent;
      const ConvergenceReport rep = convergence_harness(s, c.scheme, c.n, cfg);
      {
        std::ofstream os = detail::open_out(dir / (stem + ".csv"), out);
        rep.write_csv(os);
      }
      std::ofstream os = detail::open_out(dir / (stem + ".txt"), out);
      rep.write_text(os);
      std::ostringstream text;
      rep.write_text(text);
      out.summary.push_back(text.str());
      if (rep.failure) throw StepFailure("convergence sweep aborted: " + *rep.failure);
      break;
    }
    case Experiment::beam: {
      BeamRunOptions o;
      o.scheme = c.scheme;
      o.n = c.n.front();
      o.ny = c.ny;
      o.dt = c.dt;
      o.t_end = c.t_end;
      o.snapshot_times = c.snapshot_times;
      std::ofstream ts = detail::open_out(dir / (stem + ".csv"), out);
      ts << kDiagnosticsHeader << '\n';
      const auto res = run_beam(BeamSetup{}, o, cfg, [&](const DiagnosticsRecord& r) { write_diagnostics_row(ts, r); },
                                snapshot_writer);
      const auto& last = res.series.back();
      char buf[200];
      std::snprintf(buf, sizeof buf, "n=%zu dt=%.6g t=%g kinetic energy=%.10g rel mass=%.3e min=%.3e", o.n, res.dt,
                    last.t, last.energy, last.rel_mass, last.min);
      out.summary.emplace_back(buf);
      break;
    }
    case Experiment::diocotron: {
      DiocotronSetup s;
      s.radius = c.radius;
      s.half_width = c.half_width;
      DiocotronRunOptions o;
      o.scheme = c.scheme;
      o.n = c.n.front();
      o.ny = c.ny;
      o.t_end = c.t_end;
      o.snapshot_times = c.snapshot_times;
      std::ofstream ts = detail::open_out(dir / (stem + ".csv"), out);
      ts << kDiagnosticsHeader << '\n';
      std::ofstream lg = detail::open_out(dir / (stem + ".log"), out);
      const auto res = run_diocotron(
          s, o, cfg, [&](const DiagnosticsRecord& r) { write_diagnostics_row(ts, r); }, snapshot_writer,
          [&](const std::string& m) {
            lg << m << '\n';
            if (log) log(m);
          });
      std::ofstream ms = detail::open_out(dir / (stem + "_mode.csv"), out);
      ms << "t,dt,mode_amplitude,fd_phase\n" << std::setprecision(17);
      for (const auto& smp : res.samples)
        ms << smp.t << ',' << smp.dt << ',' << smp.mode_amplitude << ','
           << (smp.phase == Phase::semi_lagrangian ? 0 : 1) << '\n';
      char buf[200];
      std::snprintf(buf, sizeof buf, "n=%zu steps=%zu switch time=%g rel mass=%.3e min=%.3e", o.n,
                    res.series.size() - 1, res.switch_time, res.series.back().rel_mass, res.series.back().min);
      lg << buf << '\n';
      out.summary.emplace_back(buf);
      break;
    }
  }
  if (c.plot_script && c.experiment != Experiment::convergence)
    detail::write_plot_script(dir / (stem + "_plot.py"), stem + ".csv", out);
  if (log)
    for (const auto& s : out.summary) log(s);
  return out;
}

}  // namespace hwk
