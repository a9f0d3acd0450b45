#include "xyzbethe/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace xyzbethe::io {

using nlohmann::json;

namespace {

json cj(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json cvec(std::span<const cplx> v) {
  json a = json::array();
  for (cplx z : v) a.push_back(cj(z));
  return a;
}

cplx get_c(const json& j) { return {j.at("re").get<double>(), j.at("im").get<double>()}; }

std::vector<cplx> get_cvec(const json& j) {
  std::vector<cplx> v;
  for (const auto& e : j) v.push_back(get_c(e));
  return v;
}

json parse_array(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_array()) throw FormatError("expected a JSON array at the top level");
  return j;
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw FormatError(std::string("unexpected JSON content: ") + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

PhantomSide side_from(const std::string& s) {
  if (s == "none") return PhantomSide::None;
  if (s == "+inf") return PhantomSide::PlusInfinity;
  if (s == "-inf") return PhantomSide::MinusInfinity;
  throw FormatError("unknown phantom side '" + s + "'");
}

json solution_json(const BetheSolution& s) {
  return json{{"roots", cvec(s.roots)},
              {"beta", s.beta},
              {"k", s.k},
              {"p", s.p},
              {"kind", to_string(s.kind)},
              {"nu_roots", cvec(s.nu_roots)},
              {"residual_norm", s.residual_norm},
              {"sum_defect", s.sum_defect},
              {"energy", cj(s.energy)}};
}

BetheSolution solution_from(const json& j) {
  BetheSolution s;
  s.roots = get_cvec(j.at("roots"));
  s.beta = j.at("beta").get<int>();
  s.k = j.value("k", 0);
  s.p = j.value("p", 0);
  const std::string kind = j.value("kind", std::string("regular"));
  if (kind == "regular")
    s.kind = SolutionKind::Regular;
  else if (kind == "singular")
    s.kind = SolutionKind::Singular;
  else
    throw FormatError("unknown solution kind '" + kind + "'");
  if (j.contains("nu_roots")) s.nu_roots = get_cvec(j.at("nu_roots"));
  s.residual_norm = j.value("residual_norm", 0.0);
  s.sum_defect = j.value("sum_defect", 0.0);
  s.energy = get_c(j.at("energy"));
  return s;
}

json xxz_json(const XXZSolution& s) {
  return json{{"regular_roots", cvec(s.regular_roots)},
              {"phantom_count", s.phantom_count},
              {"phantom_side", to_string(s.phantom_side)},
              {"phantom_phase", s.phantom_phase},
              {"phantom_roots", phantom_labels(s)},
              {"beta", s.beta},
              {"singular", s.singular},
              {"nu_roots", cvec(s.nu_roots)},
              {"l", s.l},
              {"sum_defect", s.sum_defect},
              {"residual_norm", s.residual_norm},
              {"energy", cj(s.energy)}};
}

XXZSolution xxz_from(const json& j) {
  XXZSolution s;
  s.regular_roots = get_cvec(j.at("regular_roots"));
  s.phantom_count = j.at("phantom_count").get<int>();
  s.phantom_side = side_from(j.value("phantom_side", std::string("none")));
  s.phantom_phase = j.value("phantom_phase", 0.0);
  s.beta = j.at("beta").get<int>();
  s.singular = j.value("singular", false);
  if (j.contains("nu_roots")) s.nu_roots = get_cvec(j.at("nu_roots"));
  s.l = j.value("l", 0);
  s.sum_defect = j.value("sum_defect", 0.0);
  s.residual_norm = j.value("residual_norm", 0.0);
  s.energy = get_c(j.at("energy"));
  return s;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_complex(cplx z, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // Drop signs that only survive as -0.0000.
  auto clean = [&](double x) { return std::round(x * scale) == 0.0 ? 0.0 : x; };
  const double re = clean(z.real()), im = clean(z.imag());
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.*f%c%.*fi", decimals, re, std::signbit(im) ? '-' : '+', decimals, std::abs(im));
  return buf;
}

std::string solutions_to_json(std::span<const BetheSolution> solutions) {
  json a = json::array();
  for (const auto& s : solutions) a.push_back(solution_json(s));
  return dump(a);
}

std::vector<BetheSolution> solutions_from_json(std::string_view text) {
  const json a = parse_array(text);
  return guarded([&] {
    std::vector<BetheSolution> out;
    for (const auto& j : a) out.push_back(solution_from(j));
    return out;
  });
}

std::string solutions_to_csv(std::span<const BetheSolution> solutions) {
  std::size_t m = 0;
  for (const auto& s : solutions) m = std::max(m, s.roots.size());
  std::ostringstream os;
  for (std::size_t j = 1; j <= m; ++j) os << "lambda_" << j << ',';
  os << "beta,E\n";
  for (const auto& s : solutions) {
    for (std::size_t j = 0; j < m; ++j) os << (j < s.roots.size() ? format_complex(s.roots[j]) : "") << ',';
    os << s.beta << ',' << format_complex(s.energy) << '\n';
  }
  return os.str();
}

std::string spectrum_to_json(std::span<const SpectrumEntry> spectrum) {
  json a = json::array();
  for (const auto& e : spectrum) {
    json samples = json::array();
    for (const auto& smp : e.lambda_samples)
      samples.push_back(json{{"u_re", smp.u.real()},
                             {"u_im", smp.u.imag()},
                             {"val_re", smp.value.real()},
                             {"val_im", smp.value.imag()}});
    a.push_back(json{{"energy_re", e.energy.real()},
                     {"energy_im", e.energy.imag()},
                     {"lambda_samples", samples},
                     {"degeneracy_tag", e.degeneracy_tag},
                     {"eigen_residual", e.eigen_residual}});
  }
  return dump(a);
}

std::vector<SpectrumEntry> spectrum_from_json(std::string_view text) {
  const json a = parse_array(text);
  return guarded([&] {
    std::vector<SpectrumEntry> out;
    for (const auto& j : a) {
      SpectrumEntry e;
      e.energy = {j.at("energy_re").get<double>(), j.at("energy_im").get<double>()};
      for (const auto& smp : j.at("lambda_samples"))
        e.lambda_samples.push_back({{smp.at("u_re").get<double>(), smp.at("u_im").get<double>()},
                                    {smp.at("val_re").get<double>(), smp.at("val_im").get<double>()}});
      e.degeneracy_tag = j.value("degeneracy_tag", 0);
      e.eigen_residual = j.value("eigen_residual", 0.0);
      out.push_back(std::move(e));
    }
    return out;
  });
}

std::string spectrum_to_csv(std::span<const SpectrumEntry> spectrum) {
  std::ostringstream os;
  const std::size_t ns = spectrum.empty() ? 0 : spectrum[0].lambda_samples.size();
  os << "index,E,degeneracy_tag";
  for (std::size_t k = 0; k < ns; ++k) os << ",Lambda(" << format_complex(spectrum[0].lambda_samples[k].u) << ')';
  os << '\n';
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    os << i << ',' << format_complex(spectrum[i].energy) << ',' << spectrum[i].degeneracy_tag;
    for (const auto& smp : spectrum[i].lambda_samples) os << ',' << format_complex(smp.value, 6);
    os << '\n';
  }
  return os.str();
}

std::string match_report_to_json(const MatchReport& r) {
  json pairs = json::array();
  for (const auto& p : r.pairs)
    pairs.push_back(json{{"solution", p.solution},
                         {"spectrum", p.spectrum},
                         {"energy_gap", p.energy_gap},
                         {"lambda_gap", p.lambda_gap}});
  return dump(json{{"complete", r.complete},
                   {"energy_tol", r.energy_tol},
                   {"lambda_tol", r.lambda_tol},
                   {"max_energy_gap", r.max_energy_gap},
                   {"max_lambda_gap", r.max_lambda_gap},
                   {"pairs", pairs},
                   {"unmatched_solutions", r.unmatched_solutions},
                   {"unmatched_spectrum", r.unmatched_spectrum}});
}

std::string xxz_solutions_to_json(std::span<const XXZSolution> solutions) {
  json a = json::array();
  for (const auto& s : solutions) a.push_back(xxz_json(s));
  return dump(a);
}

std::vector<XXZSolution> xxz_solutions_from_json(std::string_view text) {
  const json a = parse_array(text);
  return guarded([&] {
    std::vector<XXZSolution> out;
    for (const auto& j : a) out.push_back(xxz_from(j));
    return out;
  });
}

std::string xxz_solutions_to_csv(std::span<const XXZSolution> solutions, int num_roots) {
  std::ostringstream os;
  for (int j = 1; j <= num_roots; ++j) os << "u_" << j << ',';
  os << "m,beta,E\n";
  for (const auto& s : solutions) {
    std::vector<std::string> cells;
    for (cplx u : s.regular_roots) cells.push_back(format_complex(u));
    for (auto& l : phantom_labels(s)) cells.push_back(std::move(l));
    cells.resize(static_cast<std::size_t>(std::max<int>(num_roots, static_cast<int>(cells.size()))));
    for (const auto& c : cells) os << csv_escape(c) << ',';
    os << s.phantom_count << ',' << s.beta << ',' << format_complex(s.energy) << '\n';
  }
  return os.str();
}

std::string correspondence_to_json(const CorrespondenceReport& r) {
  json paths = json::array();
  for (const auto& p : r.paths) {
    json images = json::array();
    for (const auto& img : p.images)
      images.push_back(json{{"lambda", cj(img.lambda)}, {"phantom", img.phantom}, {"mu", cj(img.mu)}});
    paths.push_back(json{{"start_index", p.start_index},
                         {"lost", p.lost},
                         {"steps", p.points.empty() ? 0 : p.points.size() - 1},
                         {"final_im_tau", p.points.empty() ? 0.0 : p.points.back().im_tau},
                         {"phantom_count", p.phantom_count},
                         {"side", to_string(p.side)},
                         {"mixed_sides", p.mixed_sides},
                         {"string_defect", p.string_defect},
                         {"phantom_phase", p.phantom_phase},
                         {"start", solution_json(p.start)},
                         {"end", solution_json(p.end)},
                         {"images", images}});
  }
  json pairs = json::array();
  for (const auto& c : r.pairs)
    pairs.push_back(json{{"path", c.path},
                         {"xxz", c.xxz},
                         {"side", to_string(c.side)},
                         {"beta", c.beta},
                         {"root_gap", c.root_gap},
                         {"energy_gap", cj(c.energy_gap)}});
  json warnings = json::array();
  for (const auto& w : r.warnings) warnings.push_back(json{{"path", w.path}, {"im_tau", w.im_tau}, {"message", w.message}});
  json xxz = json::array();
  for (const auto& s : r.xxz) xxz.push_back(xxz_json(s));
  return dump(json{{"complete", r.complete},
                   {"trivial", r.trivial},
                   {"pair_count", r.pairs.size()},
                   {"warning_count", r.warnings.size()},
                   {"pairs", pairs},
                   {"unmatched_paths", r.unmatched_paths},
                   {"unmatched_xxz", r.unmatched_xxz},
                   {"warnings", warnings},
                   {"paths", paths},
                   {"xxz", xxz}});
}

std::string path_log_csv(const CorrespondenceReport& r) {
  std::size_t m = 0;
  for (const auto& p : r.paths)
    for (const auto& pt : p.points) m = std::max(m, pt.roots.size());
  std::ostringstream os;
  os << "path,step,im_tau,energy_re,energy_im,residual,halvings";
  for (std::size_t j = 1; j <= m; ++j) os << ",root" << j << "_re,root" << j << "_im";
  os << '\n';
  char buf[64];
  auto num = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::string(buf);
  };
  for (const auto& p : r.paths) {
    for (std::size_t s = 0; s < p.points.size(); ++s) {
      const PathPoint& pt = p.points[s];
      os << p.start_index << ',' << s << ',' << num(pt.im_tau) << ',' << num(pt.energy.real()) << ','
         << num(pt.energy.imag()) << ',' << num(pt.residual) << ',' << pt.halvings;
      for (std::size_t j = 0; j < m; ++j) {
        if (j < pt.roots.size())
          os << ',' << num(pt.roots[j].real()) << ',' << num(pt.roots[j].imag());
        else
          os << ",,";
      }
      os << '\n';
    }
  }
  return os.str();
}

std::string trajectory_svg(const CorrespondenceReport& r, int width, int height) {
  // Horizontal: Re lambda. Vertical: Im lambda / Im tau, which stays bounded
  // while the phantom roots head for the +-1/2 lines.
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& p : r.paths)
    for (const auto& pt : p.points)
      for (cplx z : pt.roots) {
        const double y = z.imag() / pt.im_tau;
        x0 = std::min(x0, z.real());
        x1 = std::max(x1, z.real());
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
      }
  if (!(x1 >= x0)) x0 = -1, x1 = 1, y0 = -1, y1 = 1;
  const double padx = 0.05 * std::max(1e-3, x1 - x0), pady = 0.05 * std::max(1e-3, y1 - y0);
  x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;
  const double left = 60, right = 20, top = 20, bottom = 50;
  const double pw = width - left - right, ph = height - top - bottom;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream os;
  char buf[160];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf, "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"black\"/>\n",
                left, top, pw, ph);
  os << buf;
  for (int t = 0; t <= 4; ++t) {
    const double xv = x0 + (x1 - x0) * t / 4.0, yv = y0 + (y1 - y0) * t / 4.0;
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%.3g</text>\n", sx(xv),
                  top + ph + 16, xv);
    os << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%.3g</text>\n", left - 4,
                  sy(yv) + 4, yv);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%d\" text-anchor=\"middle\">Re lambda</text>\n", left + pw / 2,
                height - 10);
  os << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"14\" y=\"%.1f\" text-anchor=\"middle\" transform=\"rotate(-90 14 %.1f)\">Im lambda / Im tau</text>\n",
                top + ph / 2, top + ph / 2);
  os << buf;

  static constexpr std::array<const char*, 8> palette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                         "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  for (const auto& p : r.paths) {
    if (p.points.empty()) continue;
    const char* col = palette[p.start_index % palette.size()];
    const std::size_t nr = p.points.front().roots.size();
    for (std::size_t j = 0; j < nr; ++j) {
      os << "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"" << col << "\" points=\"";
      for (const auto& pt : p.points) {
        if (j >= pt.roots.size()) continue;
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(pt.roots[j].real()), sy(pt.roots[j].imag() / pt.im_tau));
        os << buf;
      }
      os << "\"/>\n";
      const PathPoint& a = p.points.front();
      const PathPoint& b = p.points.back();
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" fill=\"%s\"/>\n", sx(a.roots[j].real()),
                    sy(a.roots[j].imag() / a.im_tau), col);
      os << buf;
      if (j < b.roots.size()) {
        std::snprintf(buf, sizeof buf,
                      "<rect x=\"%.2f\" y=\"%.2f\" width=\"5\" height=\"5\" fill=\"none\" stroke=\"%s\"/>\n",
                      sx(b.roots[j].real()) - 2.5, sy(b.roots[j].imag() / b.im_tau) - 2.5, col);
        os << buf;
      }
    }
  }
  os << "</svg>\n";
  return os.str();
}

bool looks_like_xxz(std::string_view text) {
  try {
    const json a = json::parse(text.begin(), text.end());
    return a.is_array() && !a.empty() && a.front().is_object() && a.front().contains("phantom_count");
  } catch (const json::exception&) {
    return false;
  }
}

}  // namespace xyzbethe::io
