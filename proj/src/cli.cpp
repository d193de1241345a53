#include "strauss/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "strauss/check.hpp"
#include "strauss/phase.hpp"
#include "strauss/step_graphon.hpp"
#include "strauss/svg.hpp"

namespace strauss {

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << content;
  if (!os) throw IoError("failed while writing '" + path + "'");
}

void write_table(SweepTable& table, const std::string& out,
                 const std::string& format) {
  table.add_meta("tool_version", kToolVersion);
  write_file(out, format == "json" ? table.json() : table.csv());
}

void maybe_svg(const SweepTable& table, const std::string& path,
               const SvgSpec& spec) {
  if (path.empty()) return;
  write_file(path, emit_svg(table, spec));
}

SvgSpec trace_svg_spec(const SweepTable& table) {
  // Scale each series so the curves share the plot.
  SvgSpec spec;
  spec.x_column = "delta";
  spec.title = "optimal parameters vs delta";
  for (const char* name : {"A", "B", "c", "D"}) {
    double peak = 0.0;
    for (double v : table.column(name))
      if (std::isfinite(v)) peak = std::max(peak, std::abs(v));
    spec.series.push_back({name, peak > 0.0 ? 1.0 / peak : 1.0});
  }
  if (const auto* cross = table.find_meta("crossing_delta"))
    spec.marker_x = std::stod(*cross);
  return spec;
}

int guarded(const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

} // namespace

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"strauss: entropy-maximizing multipodal graphons under "
               "edge/triangle constraints"};
  app.require_subcommand(1);

  std::string out = "-", format = "csv", svg_path, d_mode_str = "free";
  std::string graphon_path, graphon_out;
  double e_min = 0.0, e_max = 0.0, e_step = 0.001;
  double e_point = 0.1, t_point = 0.0;
  double delta_step = 1e-4, delta_stop = 0.0;
  double window_lo = 0.005, window_hi = 0.05;
  int n_grid = 2000, draws = 1000;

  auto add_table_opts = [&](CLI::App* cmd) {
    cmd->add_option("--out", out, "output path ('-' for stdout)")->required();
    cmd->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--svg", svg_path, "also write an SVG plot here");
  };
  auto add_range_opts = [&](CLI::App* cmd) {
    cmd->add_option("--e-min", e_min, "lower edge density")->required();
    cmd->add_option("--e-max", e_max, "upper edge density")->required();
    cmd->add_option("--e-step", e_step, "edge density increment");
  };
  auto d_mode = [&]() {
    return d_mode_str == "free" ? phase::DMode::FreeD : phase::DMode::Ansatz;
  };

  auto* fm = app.add_subcommand("fm-curve",
                                "maximize F(A,B) along a sweep of e");
  add_range_opts(fm);
  add_table_opts(fm);

  auto* scaling = app.add_subcommand(
      "scaling", "decay exponents of A, B and the F gap near the threshold");
  scaling->add_option("--window-lo", window_lo,
                      "fit window lower end, in units of e0 - e");
  scaling->add_option("--window-hi", window_hi,
                      "fit window upper end, in units of e0 - e");
  scaling->add_option("--e-step", e_step, "sweep increment");
  add_table_opts(scaling);

  auto* boundary = app.add_subcommand(
      "boundary", "tripodal/bipodal phase boundary delta_m(e)");
  boundary->add_option("--d-mode", d_mode_str, "ansatz (D=0) or free")
      ->check(CLI::IsMember({"ansatz", "free"}));
  add_range_opts(boundary);
  add_table_opts(boundary);

  auto* trace = app.add_subcommand(
      "trace", "optimal parameters as a function of delta at fixed e");
  trace->add_option("--e", e_point, "edge density")->required();
  trace->add_option("--d-mode", d_mode_str, "ansatz (D=0) or free")
      ->check(CLI::IsMember({"ansatz", "free"}));
  trace->add_option("--delta-step", delta_step, "delta increment");
  trace->add_option("--delta-stop", delta_stop,
                    "sweep end (default: past the boundary)");
  add_table_opts(trace);

  auto* small_e = app.add_subcommand(
      "small-e", "branch transitions for low edge density");
  small_e->add_option("--d-mode", d_mode_str,
                      "mode for the bipodal boundary column")
      ->check(CLI::IsMember({"ansatz", "free"}));
  add_range_opts(small_e);
  add_table_opts(small_e);

  auto* classify = app.add_subcommand(
      "classify", "winning family at a single (e, t) point");
  classify->add_option("--e", e_point, "edge density")->required();
  classify->add_option("--t", t_point, "triangle density")->required();
  classify->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  classify->add_option("--graphon-out", graphon_out,
                       "write the winning graphon as JSON here");

  auto* check = app.add_subcommand("check", "oracle and identity self-check");
  check->add_option("--n-grid", n_grid, "oracle grid size")
      ->check(CLI::Range(16, 1 << 20));
  check->add_option("--draws", draws, "random parameter draws")
      ->check(CLI::Range(1, 1000000));
  check->add_option("--graphon", graphon_path,
                    "also validate this StepGraphon JSON file");

  try {
    std::vector<std::string> mutable_args(args.rbegin(), args.rend());
    app.parse(mutable_args);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  if (fm->parsed() || boundary->parsed() || small_e->parsed()) {
    if (!(e_min <= e_max)) {
      std::cerr << "usage error: --e-min must not exceed --e-max\n";
      return 2;
    }
    if (!(e_step > 0.0)) {
      std::cerr << "usage error: --e-step must be positive\n";
      return 2;
    }
  }

  if (fm->parsed()) {
    return guarded([&] {
      auto table = phase::fm_curve(e_min, e_max, e_step);
      write_table(table, out, format);
      maybe_svg(table, svg_path,
                {"e", {{"gap", 1.0}}, std::nullopt, "F_m(e) - H''(e)"});
    });
  }

  if (scaling->parsed()) {
    return guarded([&] {
      const double e0 = phase::e_threshold();
      auto table = phase::fm_curve(e0 - window_hi - 2 * e_step,
                                   e0 - window_lo, e_step);
      const auto fit = phase::scaling_fit(table, window_lo, window_hi);
      table.add_meta("window_lo", format_double(window_lo));
      table.add_meta("window_hi", format_double(window_hi));
      table.add_meta("slope_A", format_double(fit.slope_A));
      table.add_meta("slope_B", format_double(fit.slope_B));
      table.add_meta("slope_gap", format_double(fit.slope_gap));
      table.add_meta("threshold_crossing", format_double(phase::fm_crossing()));
      write_table(table, out, format);
      maybe_svg(table, svg_path,
                {"e", {{"A", 1.0}, {"B", 1.0}, {"gap", 1.0}}, std::nullopt,
                 "decay toward the threshold"});
    });
  }

  if (boundary->parsed()) {
    return guarded([&] {
      auto table = phase::boundary_curve(e_min, e_max, e_step, d_mode());
      write_table(table, out, format);
      maybe_svg(table, svg_path,
                {"e", {{"delta_m", 1.0}}, std::nullopt,
                 "phase boundary delta_m(e)"});
    });
  }

  if (trace->parsed()) {
    return guarded([&] {
      auto table = phase::trace_vs_delta(e_point, d_mode(), delta_step,
                                         delta_stop);
      write_table(table, out, format);
      maybe_svg(table, svg_path, trace_svg_spec(table));
    });
  }

  if (small_e->parsed()) {
    return guarded([&] {
      SweepTable table;
      table.kind = "small-e";
      table.columns = {"e", "delta_theta1_oe", "delta_oe_bipodal"};
      table.add_meta("d_mode", phase::to_string(d_mode()));
      table.add_meta("e_min", format_double(e_min));
      table.add_meta("e_max", format_double(e_max));
      table.add_meta("e_step", format_double(e_step));
      const double nan = std::nan("");
      for (double e = e_min; e <= e_max + 1e-12; e += e_step) {
        double t1 = nan, ob = nan;
        try {
          if (auto v = phase::theta1_crossing(e)) t1 = *v;
        } catch (const std::exception&) {
        }
        try {
          if (auto row = phase::delta_max(e, d_mode())) ob = row->delta_m;
        } catch (const std::exception&) {
        }
        table.rows.push_back({e, t1, ob});
      }
      write_table(table, out, format);
      maybe_svg(table, svg_path,
                {"e", {{"delta_theta1_oe", 1.0}, {"delta_oe_bipodal", 1.0}},
                 std::nullopt, "small-e transitions"});
    });
  }

  if (classify->parsed()) {
    return guarded([&] {
      const auto c = phase::classify_point(e_point, t_point);
      if (format == "json") {
        std::ostringstream os;
        os << "{\"label\":\"" << phase::to_string(c.label) << "\","
           << "\"entropy\":" << format_double(c.entropy) << ","
           << "\"delta\":" << format_double(c.delta) << ","
           << "\"tie\":" << (c.tie ? "true" : "false");
        if (c.tripodal) {
          os << ",\"params\":{\"A\":" << format_double(c.tripodal->A)
             << ",\"B\":" << format_double(c.tripodal->B)
             << ",\"c\":" << format_double(c.tripodal->c)
             << ",\"D\":" << format_double(c.tripodal->D) << "}";
        }
        os << "}\n";
        std::cout << os.str();
      } else {
        std::cout << "label: " << phase::to_string(c.label) << "\n"
                  << "entropy: " << format_double(c.entropy) << "\n"
                  << "delta: " << format_double(c.delta) << "\n";
        if (c.tripodal)
          std::cout << "A: " << format_double(c.tripodal->A)
                    << "\nB: " << format_double(c.tripodal->B)
                    << "\nc: " << format_double(c.tripodal->c)
                    << "\nD: " << format_double(c.tripodal->D) << "\n";
        if (c.tie) std::cout << "tie: broken toward the reported label\n";
      }
      if (!graphon_out.empty()) {
        StepGraphon g = c.tripodal
                            ? sym21_graphon({e_point, c.tripodal->A,
                                             c.tripodal->B, c.tripodal->c,
                                             c.tripodal->D})
                            : symmetric_bipodal(e_point, c.delta);
        write_file(graphon_out, g.to_json() + "\n");
      }
    });
  }

  if (check->parsed()) {
    return guarded([&] {
      bool ok = run_check(n_grid, draws, std::cout);
      if (!graphon_path.empty()) {
        std::ifstream is(graphon_path);
        if (!is) throw IoError("cannot read '" + graphon_path + "'");
        std::stringstream buf;
        buf << is.rdbuf();
        const StepGraphon g = StepGraphon::from_json(buf.str());
        const auto grid = riemann_oracle(g, n_grid);
        const double err = std::max(
            {std::abs(grid.edge - edge_density(g)),
             std::abs(grid.triangle - triangle_density(g)),
             std::abs(grid.entropy - graphon_entropy(g))});
        const bool gok = err <= 5.0 / n_grid;
        std::cout << (gok ? "[ok]   " : "[FAIL] ") << "user graphon vs oracle"
                  << "  (max err " << err << ")\n";
        ok &= gok;
      }
      if (!ok) throw std::runtime_error("self-check failed");
    });
  }

  return 0;
}

} // namespace strauss
