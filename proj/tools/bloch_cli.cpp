#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bloch/borel.hpp"
#include "bloch/cs.hpp"
#include "bloch/dilog.hpp"
#include "bloch/error.hpp"
#include "bloch/geom.hpp"
#include "bloch/scissors.hpp"
#include "bloch/text.hpp"
#include "bloch/triang.hpp"

using namespace bloch;
using Record = nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

enum Exit { kOk = 0, kNumeric = 1, kInput = 2 };

struct RunConfig {
  long precision = 256;
  long denominator_bound = 120;
  std::string format = "text";
  bool allow_flat = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(const Real& x) { return x.to_exact_string(); }
Record num(const Complex& z) { return Record::array({num(z.re), num(z.im)}); }
std::string rat(const Rational& q) { return rational_to_string(q); }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

enum class FileKind { Triangulation, Element, Polyhedron, Vector };

FileKind kind_of(const std::string& text) {
  std::istringstream in(text);
  auto lines = read_lines(in);
  if (lines.empty()) return FileKind::Element;
  const auto& key = lines[0].tokens[0];
  if (key == "tets" || key == "cusps") return FileKind::Triangulation;
  if (key == "vertex" || key == "face") return FileKind::Polyhedron;
  if (key == "vector") return FileKind::Vector;
  return FileKind::Element;
}

Triangulation load_triangulation(const std::string& path, long bits) {
  std::string text = slurp(path);
  if (kind_of(text) != FileKind::Triangulation) throw UsageError(path + " is not a triangulation file");
  std::istringstream in(text);
  auto t = parse_triangulation(in, bits);
  validate(t, bits);
  return t;
}

PreBlochElement load_element(const std::string& path, long bits) {
  std::istringstream in(slurp(path));
  return parse_prebloch(in, bits);
}

std::vector<Real> load_vector(const std::string& path, long bits) {
  std::istringstream in(slurp(path));
  std::vector<Real> v;
  for (const auto& line : read_lines(in)) {
    if (line.tokens[0] != "vector") syntax_error(line, "expected 'vector <x1> <x2> ...'");
    for (std::size_t i = 1; i < line.tokens.size(); ++i) v.push_back(parse_real_token(line, line.tokens[i], bits));
  }
  if (v.empty()) fail(Errc::SyntaxError, path + ": empty vector");
  return v;
}

Complex parse_complex_flag(const std::string& text, long bits) {
  auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("expected <re>,<im>, got '" + text + "'");
  try {
    return {Real::parse(text.substr(0, comma), bits), Real::parse(text.substr(comma + 1), bits)};
  } catch (const Error&) {
    throw UsageError("expected <re>,<im>, got '" + text + "'");
  }
}

std::vector<Filling> parse_fillings(const std::vector<std::string>& specs, int cusps) {
  if (static_cast<int>(specs.size()) > cusps) throw UsageError("more --fill values than cusps");
  std::vector<Filling> out(static_cast<std::size_t>(cusps));
  for (std::size_t j = 0; j < specs.size(); ++j) {
    if (specs[j] == "complete" || specs[j] == "-") continue;
    auto comma = specs[j].find(',');
    if (comma == std::string::npos) throw UsageError("expected --fill p,q or complete, got '" + specs[j] + "'");
    try {
      out[j] = Filling{false, std::stol(specs[j].substr(0, comma)), std::stol(specs[j].substr(comma + 1))};
    } catch (const std::exception&) {
      throw UsageError("expected integers in --fill '" + specs[j] + "'");
    }
  }
  return out;
}

Record header(const std::string& command, const RunConfig& cfg) {
  Record r;
  r["schema_version"] = kSchemaVersion;
  r["command"] = command;
  r["precision_bits"] = cfg.precision;
  return r;
}

Record element_record(const PreBlochElement& e) {
  Record r;
  r["field"] = e.field() ? field_line(*e.field()) : "numeric";
  Record terms = Record::array();
  for (const auto& t : e.terms()) terms.push_back(t.coeff.get_str() + " * " + t.z.to_string());
  r["terms"] = terms;
  return r;
}

// D2 at every root for exact elements, or the single numeric value.
Record volumes_record(const PreBlochElement& e, long bits) {
  Record r;
  Record per = Record::array();
  Real best(bits);
  bool have = false;
  if (e.field() && e.field()->degree() > 1) {
    for (const auto& root : embeddings(e.field(), bits).all_roots()) {
      Real v = volume_of_prebloch(e, root, bits);
      per.push_back({{"root", num(root)}, {"d2", num(v)}});
      if (!have || v > best) best = v;
      have = true;
    }
  } else {
    std::optional<Complex> root;
    if (e.field()) root = embeddings(e.field(), bits).all_roots().at(0);
    best = volume_of_prebloch(e, root, bits);
    per.push_back({{"root", root ? num(*root) : Record()}, {"d2", num(best)}});
  }
  r["per_embedding"] = per;
  r["volume"] = num(best);
  return r;
}

Record certificate_record(const PreBlochElement& e) {
  Record r;
  if (e.is_zero() || !e.is_exact()) {
    r["verdict"] = e.is_zero() ? verdict_name(BlochVerdict::CertifiedZero) : "unavailable";
    if (!e.is_zero()) r["reason"] = "numeric symbols";
    return r;
  }
  auto cert = is_bloch(e);
  r["verdict"] = verdict_name(cert.verdict);
  r["elements"] = cert.elements.size();
  r["verified_relations"] = cert.relations.size();
  r["residual_rank"] = cert.residual_basis.size();
  return r;
}

Record cmd_invariant(const std::string& path, const RunConfig& cfg) {
  const long bits = cfg.precision;
  Record r = header("invariant", cfg);
  std::string text = slurp(path);
  PreBlochElement beta;
  if (kind_of(text) == FileKind::Triangulation) {
    auto t = load_triangulation(path, bits);
    beta = bloch_invariant(t);
    Record tri;
    tri["tetrahedra"] = t.n;
    tri["cusps"] = t.h;
    tri["shape_field"] = t.field ? field_line(*t.field) : "numeric";
    tri["shapes_exact"] = t.field != nullptr;
    r["triangulation"] = tri;
  } else if (kind_of(text) == FileKind::Element) {
    std::istringstream in(text);
    auto e = parse_prebloch(in, bits);
    r["dropped_symbols"] = e.dropped();
    beta = six_fold_normalize(e);
  } else {
    throw UsageError(path + " is neither a triangulation nor an element file");
  }
  r["beta"] = element_record(beta);
  r["certificate"] = certificate_record(beta);
  r["volume"] = volumes_record(beta, bits);
  return r;
}

struct Solved {
  Triangulation t;
  FilledSystem sys;
  SolveResult sol;
};

Solved solve_file(const std::string& path, const std::vector<std::string>& fill, const RunConfig& cfg) {
  const long bits = cfg.precision;
  auto t = load_triangulation(path, bits);
  if (!t.u) throw UsageError(path + " has no gluing system (urow lines)");
  if (!t.has_shapes()) throw UsageError(path + " has no starting shapes");
  std::vector<Filling> fillings = t.fillings;
  if (!fill.empty()) fillings = parse_fillings(fill, t.h);
  auto sys = filled_system(t, fillings, bits);
  SolveOptions options;
  options.allow_flat = cfg.allow_flat;
  auto sol = newton_solve(sys, numeric_shapes(t, bits), bits, options);
  return {std::move(t), std::move(sys), std::move(sol)};
}

Record fillings_record(const Solved& s, long bits) {
  Record cusps = Record::array();
  for (int j = 0; j < s.sys.h; ++j) {
    const auto& f = s.sys.fillings[static_cast<std::size_t>(j)];
    Record c;
    c["cusp"] = j;
    if (f.complete) {
      c["filling"] = "complete";
    } else {
      c["filling"] = Record::array({f.p, f.q});
      auto [rr, ss] = completion(f.p, f.q);
      c["lambda_unreduced"] = num(s.sol.lambdas[static_cast<std::size_t>(j)]);
      c["core_length"] = num(core_length(s.sys, s.sol.shapes, j, rr, ss, bits));
    }
    cusps.push_back(c);
  }
  return cusps;
}

Record cmd_fill(const std::string& path, const std::vector<std::string>& fill, const RunConfig& cfg) {
  const long bits = cfg.precision;
  auto s = solve_file(path, fill, cfg);
  Record r = header("fill", cfg);
  Record shapes = Record::array();
  for (const auto& z : s.sol.shapes) shapes.push_back(num(z));
  r["shapes"] = shapes;
  r["cusps"] = fillings_record(s, bits);
  r["volume"] = num(solution_volume(s.sol, bits));
  r["residual"] = num(s.sol.residual);
  r["newton_steps"] = s.sol.steps;
  r["flat_shapes"] = static_cast<int>(std::count(s.sol.flat.begin(), s.sol.flat.end(), true));
  return r;
}

// 10^-(digits after the point) of a typed decimal, widened by a factor 10.
Real typed_tolerance(const std::string& text, long bits) {
  auto dot = text.find('.');
  long decimals = 0;
  if (dot != std::string::npos) {
    for (std::size_t i = dot + 1; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) ++decimals;
  }
  return Real::parse("1e" + std::to_string(1 - decimals), bits);
}

Record cmd_cs(const std::string& path, const std::vector<std::string>& fill, const std::string& calibrate,
              const RunConfig& cfg) {
  const long bits = cfg.precision;
  auto s = solve_file(path, fill, cfg);
  auto c = solve_flattening(s.sys.u, s.sys.full_d);
  auto res = cs_formula(s.sol.shapes, s.sol.lambdas, c, bits);
  Integer bound(cfg.denominator_bound);
  Record r = header("cs", cfg);
  r["cusps"] = fillings_record(s, bits);
  r["vol"] = num(res.vol);
  r["cs_representative"] = num(res.cs);
  r["cs_over_2pi2_mod_half"] = num(res.normalized());
  r["flattening_integral"] = c.integral;
  r["denominator_bound"] = cfg.denominator_bound;
  auto q = rationalize_mod_pi2(res.cs, bound);
  r["cs_over_pi2_rational"] = q ? Record(rat(*q)) : Record();
  if (!calibrate.empty()) {
    Real known(bits);
    try {
      known = Real::parse(calibrate, bits);
    } catch (const Error&) {
      throw UsageError("--calibrate-cs expects a decimal, got '" + calibrate + "'");
    }
    auto alpha = fit_alpha(res, known, bound, typed_tolerance(calibrate, bits));
    if (alpha) {
      r["alpha_fitted"] = rat(*alpha);
      r["cs_calibrated"] = num(calibrated_cs(res, *alpha));
    } else {
      r["alpha_fitted"] = Record();
    }
  }
  return r;
}

std::vector<Complex> parse_hints(const std::vector<std::string>& specs, long bits) {
  std::vector<Complex> hints;
  for (const auto& h : specs) hints.push_back(parse_complex_flag(h, bits));
  return hints;
}

Record cmd_borel(const std::vector<std::string>& paths, const std::vector<std::string>& hint_specs,
                 const RunConfig& cfg) {
  const long bits = cfg.precision;
  auto hints = parse_hints(hint_specs, bits);
  Record r = header("borel", cfg);
  Record vectors = Record::array();
  std::vector<std::vector<Real>> plain;
  for (const auto& p : paths) {
    auto v = borel_regulator(load_element(p, bits), bits, hints);
    if (r.find("embeddings") == r.end()) {
      Record roots = Record::array();
      for (const auto& root : v.roots) roots.push_back(num(root));
      r["field"] = field_line(*v.field);
      r["embeddings"] = roots;
    }
    Record values = Record::array();
    for (const auto& x : v.values) values.push_back(num(x));
    vectors.push_back({{"file", p}, {"values", values}});
    plain.push_back(v.values);
  }
  r["vectors"] = vectors;
  r["rank"] = rank_witness(plain, bits).rank;
  return r;
}

Record cmd_relation(const std::vector<std::string>& paths, const std::vector<std::string>& hint_specs,
                    long coefficient_bound, const RunConfig& cfg) {
  const long bits = cfg.precision;
  if (paths.size() < 2) throw UsageError("relation needs at least two inputs");
  auto hints = parse_hints(hint_specs, bits);
  std::vector<PreBlochElement> elements;
  std::vector<std::vector<Real>> vectors;
  for (const auto& p : paths) {
    if (kind_of(slurp(p)) == FileKind::Vector) {
      vectors.push_back(load_vector(p, bits));
    } else {
      elements.push_back(load_element(p, bits));
    }
  }
  if (!elements.empty() && !vectors.empty()) throw UsageError("relation inputs must be all elements or all vectors");
  std::optional<RelationReport> rel;
  if (!elements.empty()) {
    rel = detect_relation(elements, Integer(coefficient_bound), bits, hints);
  } else {
    for (const auto& v : vectors) {
      if (v.size() != vectors[0].size()) fail(Errc::DimensionMismatch, "vectors differ in length");
    }
    rel = detect_relation(vectors, Integer(coefficient_bound), bits);
  }
  Record r = header("relation", cfg);
  r["coefficient_bound"] = coefficient_bound;
  if (!rel) {
    r["relation"] = Record();
    return r;
  }
  Record coeffs = Record::array();
  for (const auto& a : rel->coefficients) coeffs.push_back(a.get_str());
  r["relation"] = {{"coefficients", coeffs},
                   {"residual", num(rel->residual)},
                   {"tolerance", num(rel->tolerance)},
                   {"confidence", confidence_name(rel->confidence)}};
  return r;
}

Record cmd_scissors(const std::string& path, const RunConfig& cfg) {
  const long bits = cfg.precision;
  std::istringstream in(slurp(path));
  auto p = parse_polyhedron(in, bits);
  auto cls = polyhedron_class(p);
  Record r = header("scissors", cfg);
  r["vertices"] = p.vertices.size();
  r["face_triangles"] = face_triangles(p).size();
  r["class"] = element_record(cls);
  r["volume"] = volumes_record(cls, bits);
  Real tol = pow2(-bits + 24, bits);
  bool d2_agree = true, wedge_agree = true;
  Record apexes = Record::array();
  for (std::size_t a = 0; a < p.vertices.size(); ++a) {
    auto d = cone_simplices(p, a);
    auto diff = decomposition_class(d) - cls;
    auto vols = volumes_record(diff, bits);
    for (const auto& e : vols["per_embedding"]) {
      if (abs(Real::parse(e["d2"].get<std::string>(), bits)) > tol) d2_agree = false;
    }
    if (diff.is_exact() && !diff.is_zero() && !wedge(diff).certified) wedge_agree = false;
    apexes.push_back({{"apex", a}, {"simplices", d.simplices.size()}});
  }
  r["apexes"] = apexes;
  Record check;
  check["d2_agree"] = d2_agree;
  check["tolerance"] = num(tol);
  check["wedge_agree"] = cls.is_exact() ? Record(wedge_agree) : Record("unavailable");
  r["apex_independence"] = check;
  return r;
}

void render_text(const Record& r, std::ostream& os, const std::string& indent = "") {
  for (auto it = r.begin(); it != r.end(); ++it) {
    const auto& v = it.value();
    const std::string key = r.is_object() ? it.key() : "-";
    if (v.is_object()) {
      os << indent << key << ":\n";
      render_text(v, os, indent + "  ");
    } else if (v.is_array() && std::any_of(v.begin(), v.end(), [](const Record& x) { return x.is_structured(); })) {
      os << indent << key << ":\n";
      for (const auto& item : v) {
        if (item.is_object()) {
          os << indent << "  -\n";
          render_text(item, os, indent + "    ");
        } else {
          std::string line;
          for (const auto& x : item) line += (line.empty() ? "" : " ") + (x.is_string() ? x.get<std::string>() : x.dump());
          os << indent << "  - " << line << "\n";
        }
      }
    } else if (v.is_array()) {
      std::string line;
      for (const auto& x : v) line += (line.empty() ? "" : " ") + (x.is_string() ? x.get<std::string>() : x.dump());
      os << indent << key << ": " << line << "\n";
    } else if (v.is_null()) {
      os << indent << key << ": none\n";
    } else {
      os << indent << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  }
}

void emit(const Record& r, const RunConfig& cfg) {
  if (cfg.format == "records") {
    std::cout << r.dump(2) << "\n";
  } else {
    render_text(r, std::cout);
  }
}

int report_error(const std::string& command, const std::string& code, const std::string& message,
                 const RunConfig& cfg, int exit_code) {
  std::cerr << "error: " << code << ": " << message << "\n";
  if (cfg.format == "records") {
    Record r = header(command, cfg);
    r["error"] = {{"code", code}, {"message", message}};
    std::cout << r.dump(2) << "\n";
  }
  return exit_code;
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::JacobianSingular:
    case Errc::Diverged:
    case Errc::DegeneratedToFlat:
    case Errc::RootFindingFailed:
      return kNumeric;
    default:
      return kInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bloch invariants, volumes and Chern-Simons invariants of hyperbolic 3-manifolds"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--precision", cfg.precision, "working precision in bits (>= 64)")->capture_default_str();
  app.add_option("--denom-bound", cfg.denominator_bound, "denominator bound for rational reconstruction")
      ->capture_default_str();
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "records"}))->capture_default_str();
  app.add_flag("--allow-flat", cfg.allow_flat, "accept solutions with flat shapes");

  std::string file, calibrate;
  std::vector<std::string> files, fill, hints;
  long coefficient_bound = 1000;

  auto* invariant = app.add_subcommand("invariant", "Bloch invariant, certificate and volumes");
  invariant->add_option("file", file, "triangulation or pre-Bloch element file")->required();

  auto* fill_cmd = app.add_subcommand("fill", "Dehn filling: shapes, core lengths, volume");
  fill_cmd->add_option("file", file, "triangulation file")->required();
  fill_cmd->add_option("--fill", fill, "per cusp: p,q or complete");

  auto* cs = app.add_subcommand("cs", "volume and Chern-Simons invariant");
  cs->add_option("file", file, "triangulation file")->required();
  cs->add_option("--fill", fill, "per cusp: p,q or complete");
  cs->add_option("--calibrate-cs", calibrate, "known (1/2 pi^2) CS used to fit alpha");

  auto* borel = app.add_subcommand("borel", "Borel regulator vectors");
  borel->add_option("files", files, "pre-Bloch element files")->required();
  borel->add_option("--embedding", hints, "approximate root re,im per coordinate");

  auto* relation = app.add_subcommand("relation", "integer relation between regulator vectors");
  relation->add_option("files", files, "element files, or files of 'vector' lines")->required();
  relation->add_option("--embedding", hints, "approximate root re,im per coordinate");
  relation->add_option("--coeff-bound", coefficient_bound, "largest coefficient searched")->capture_default_str();

  auto* scissors = app.add_subcommand("scissors", "scissors-congruence class of an ideal polyhedron");
  scissors->add_option("file", file, "polyhedron file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    if (cfg.precision < 64) throw UsageError("--precision must be at least 64");
    if (cfg.denominator_bound < 1) throw UsageError("--denom-bound must be positive");
    Record r;
    if (command == "invariant") r = cmd_invariant(file, cfg);
    if (command == "fill") r = cmd_fill(file, fill, cfg);
    if (command == "cs") r = cmd_cs(file, fill, calibrate, cfg);
    if (command == "borel") r = cmd_borel(files, hints, cfg);
    if (command == "relation") r = cmd_relation(files, hints, coefficient_bound, cfg);
    if (command == "scissors") r = cmd_scissors(file, cfg);
    emit(r, cfg);
  } catch (const UsageError& e) {
    return report_error(command, "UsageError", e.what(), cfg, kInput);
  } catch (const Error& e) {
    return report_error(command, std::string(errc_name(e.code())), e.what(), cfg, exit_code_for(e.code()));
  }
  return kOk;
}
