// hypmult: command-line front end.  Exit status 0 when every check passes,
// 1 when an inequality fails, 2 on bad input or usage.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hypmult/harness.hpp"
#include "hypmult/itree.hpp"

using namespace hypmult;

namespace {

constexpr int kOk = 0;
constexpr int kViolated = 1;
constexpr int kInputError = 2;

// A path to a file holding the polynomial, or the polynomial itself.
std::string read_poly_text(const std::string& arg) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(arg, ec)) return arg;
  std::ifstream in(arg);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MPoly load_poly(const std::string& arg, const FieldPtr& F, int nvars) { return poly_parse(read_poly_text(arg), F, nvars); }

int violated(const std::string& what) {
  std::cerr << "INEQUALITY VIOLATED: " << what << "\n";
  return kViolated;
}

struct Common {
  std::string field = "2";
  int n = 2;
  std::string poly;
};

void add_common(CLI::App* cmd, Common& c, bool with_n = true) {
  cmd->add_option("--field", c.field, "field spec p or p^k")->required();
  if (with_n) cmd->add_option("--n", c.n, "projective dimension")->required();
  cmd->add_option("--poly", c.poly, "polynomial file or literal")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local multiplicities of points on hypersurfaces over finite fields"};
  app.require_subcommand(1);
  int status = kOk;

  Common mult_args;
  std::string point_text;
  auto* mult = app.add_subcommand("mult", "multiplicity at a point, by both algorithms");
  add_common(mult, mult_args);
  mult->add_option("--point", point_text, "a0:a1:...:an")->required();
  mult->callback([&] {
    auto F = gf::parse_field(mult_args.field);
    auto X = HypersurfaceScheme::make(load_poly(mult_args.poly, F, mult_args.n + 1));
    auto P = parse_point(point_text, F);
    if (P.n() != X.n) throw error("point has the wrong number of coordinates");
    auto a = multiplicity_at(X, P);
    auto b = multiplicity_via_derived(X, P);
    std::cout << "mu " << a.mu << "\n" << to_string(a.method) << " " << a.mu << "\n" << to_string(b.method) << " " << b.mu << "\n";
    if (a.mu != b.mu) status = violated("the two multiplicity algorithms disagree");
  });

  int hs_n = 0, hs_r = 0, hs_s = 0;
  auto* hs = app.add_subcommand("hilbert-samuel", "local Hilbert-Samuel value of a degree-r point in P^n");
  hs->add_option("N", hs_n)->required();
  hs->add_option("R", hs_r)->required();
  hs->add_option("S", hs_s)->required();
  hs->callback([&] { std::cout << hilbert_samuel(hs_n, hs_r, hs_s) << "\n"; });

  Common sing_args;
  auto* singdim = app.add_subcommand("singdim", "dimension of the singular locus");
  add_common(singdim, sing_args);
  singdim->callback([&] {
    auto X = HypersurfaceScheme::make(load_poly(sing_args.poly, gf::parse_field(sing_args.field), sing_args.n + 1));
    auto S = singular_locus(X);
    std::cout << "s " << S.dim << "\nbasis_size " << S.basis_size << "\n";
  });

  Common red_args;
  auto* reduced = app.add_subcommand("reduced", "reducedness verdict");
  add_common(reduced, red_args);
  reduced->callback([&] {
    auto X = HypersurfaceScheme::make(load_poly(red_args.poly, gf::parse_field(red_args.field), red_args.n + 1));
    auto v = is_reduced(X);
    std::cout << (v.reduced ? "reduced" : "not reduced") << "\n" << v.reason << "\n";
  });

  auto* tree = app.add_subcommand("tree", "intersection tree files");
  tree->require_subcommand(1);
  std::string tree_file, target;
  std::optional<std::uint64_t> mu_product;
  auto* validate = tree->add_subcommand("validate", "structural checks");
  validate->add_option("FILE", tree_file)->required();
  validate->callback([&] {
    auto forest = load_forest(tree_file);
    auto problems = validate_forest(forest);
    for (auto& p : problems) std::cout << p << "\n";
    if (problems.empty()) std::cout << "valid: " << forest.trees.size() << " trees at level " << forest.level << "\n";
    else status = kInputError;
  });
  auto* chongshu = tree->add_subcommand("chongshu2", "aggregate weight of a point against its multiplicity product");
  chongshu->add_option("FILE", tree_file)->required();
  chongshu->add_option("--target", target, "scheme name in the file")->required();
  chongshu->add_option("--mu-product", mu_product, "defaults to the product over the family equations");
  chongshu->callback([&] {
    auto forest = load_forest(tree_file);
    auto M = find_scheme(forest, target);
    if (!M) throw error("no scheme named " + target);
    if (!mu_product) {
      if (!M->point) throw error("--mu-product is required for a registered target");
      std::uint64_t product = 1;
      for (auto& member : forest.family) {
        if (!member.equation) throw error("family member " + member.name + " has no equation; pass --mu-product");
        product *= static_cast<std::uint64_t>(multiplicity_at(HypersurfaceScheme::make(*member.equation), M->point->representative()).mu);
      }
      mu_product = product;
    }
    auto v = check_chongshu2(forest, *M, *mu_product);
    if (!v.applicable) {
      std::cout << "not applicable: " << v.reason << "\n";
      status = kInputError;
      return;
    }
    std::cout << "lhs " << v.lhs << "\nrhs " << v.rhs << "\n" << (v.ok ? "ok" : "VIOLATED") << "\n";
    if (!v.ok) status = violated(v.reason);
  });

  Common bound_args;
  bool as_json = false;
  auto* bound = app.add_subcommand("verify-bound", "sum of mu (mu-1)^(n-s-1) against the main bound");
  add_common(bound, bound_args);
  bound->add_flag("--json", as_json, "print the full report as JSON");
  bound->callback([&] {
    auto X = HypersurfaceScheme::make(load_poly(bound_args.poly, gf::parse_field(bound_args.field), bound_args.n + 1));
    auto r = verify_main_bound(X);
    if (as_json) {
      std::cout << bound_report_to_json(r).dump(2) << "\n";
    } else {
      std::cout << "delta " << r.delta << "\nn " << r.n << "\nq " << r.q << "\ns " << r.s << "\nrational_points "
                << r.rational_points << "\nsingular_points " << r.per_point.size() << "\nlhs " << r.lhs << "\nrhs " << r.rhs
                << "\nratio " << r.ratio << "\n" << (r.ok ? "ok" : "VIOLATED") << "\n";
    }
    if (!r.ok) status = violated("main bound: " + std::to_string(r.lhs) + " > " + std::to_string(r.rhs));
  });

  CorpusConfig corpus_cfg;
  int corpus_delta = 3;
  std::string out_dir;
  std::string planted_text;
  auto* corpus = app.add_subcommand("corpus", "write a seeded corpus of reduced hypersurfaces");
  corpus->add_option("--field", corpus_cfg.field)->required();
  corpus->add_option("--n", corpus_cfg.n)->required();
  corpus->add_option("--delta", corpus_delta, "degree")->required();
  corpus->add_option("--count", corpus_cfg.count)->required();
  corpus->add_option("--seed", corpus_cfg.seed)->required();
  corpus->add_option("--out", out_dir)->required();
  corpus->add_option("--singular-point", planted_text, "force a singular point");
  corpus->add_flag("--allow-nonreduced", [&](std::int64_t) { corpus_cfg.require_reduced = false; });
  corpus->callback([&] {
    corpus_cfg.delta_min = corpus_cfg.delta_max = corpus_delta;
    if (!planted_text.empty()) corpus_cfg.force_singular_point = parse_point(planted_text, gf::parse_field(corpus_cfg.field));
    auto c = generate_corpus(corpus_cfg);
    std::filesystem::create_directories(out_dir);
    nlohmann::json manifest;
    manifest["field"] = corpus_cfg.field;
    manifest["n"] = std::to_string(corpus_cfg.n);
    manifest["delta"] = std::to_string(corpus_delta);
    manifest["seed"] = std::to_string(corpus_cfg.seed);
    manifest["attempts"] = std::to_string(c.stats.attempts);
    manifest["rejected_non_reduced"] = std::to_string(c.stats.rejected_non_reduced);
    manifest["rejected_empty"] = std::to_string(c.stats.rejected_empty);
    manifest["members"] = nlohmann::json::array();
    for (std::size_t i = 0; i < c.members.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "member_%04zu.poly", i);
      std::ofstream(std::filesystem::path(out_dir) / name) << c.members[i].f.to_string() << "\n";
      manifest["members"].push_back({{"file", name}, {"poly", c.members[i].f.to_string()}});
    }
    std::ofstream(std::filesystem::path(out_dir) / "manifest.json") << manifest.dump(2) << "\n";
    std::cout << "wrote " << c.members.size() << " members after " << c.stats.attempts << " attempts\n";
  });

  std::string cyl_field;
  int cyl_n = 3, cyl_delta = 3;
  auto* cylinder = app.add_subcommand("cylinder", "cone over concurrent lines: exact value of the sum");
  cylinder->add_option("--field", cyl_field)->required();
  cylinder->add_option("--n", cyl_n)->required();
  cylinder->add_option("--delta", cyl_delta)->required();
  cylinder->callback([&] {
    auto r = cylinder_family_check(cyl_delta, cyl_n, gf::parse_field(cyl_field));
    std::cout << "f " << r.f.to_string() << "\ns " << r.s << "\nsingular_points " << r.singular_points << "\nlhs " << r.lhs
              << "\nexpected " << r.expected << "\nrhs " << r.bound.rhs << "\n" << (r.ok ? "ok" : "VIOLATED") << "\n";
    if (!r.ok) status = violated("cylinder family value differs from delta (delta-1) #P^(n-2)");
  });

  Common fulton_args;
  bool closed_points = false;
  auto* fulton = app.add_subcommand("fulton", "sum of mu (mu-1) on a reduced plane curve against delta (delta-1)");
  add_common(fulton, fulton_args, false);
  fulton->add_flag("--closed-points", closed_points, "also sum over closed points weighted by degree");
  fulton->callback([&] {
    auto X = HypersurfaceScheme::make(load_poly(fulton_args.poly, gf::parse_field(fulton_args.field), 3));
    auto r = fulton_check(X, closed_points);
    std::cout << "rational_sum " << r.rational_sum << "\n";
    if (r.closed_sum) std::cout << "closed_sum " << *r.closed_sum << "\n";
    std::cout << "bound " << r.bound << "\n" << (r.ok ? "ok" : "VIOLATED") << "\n";
    if (!r.ok) status = violated("plane-curve bound");
  });

  std::string bz_field, bz_f, bz_g;
  auto* bezout = app.add_subcommand("bezout", "intersection cycle of two plane curves");
  bezout->add_option("--field", bz_field)->required();
  bezout->add_option("--poly1", bz_f)->required();
  bezout->add_option("--poly2", bz_g)->required();
  bezout->callback([&] {
    auto F = gf::parse_field(bz_field);
    auto r = bezout_check(load_poly(bz_f, F, 3), load_poly(bz_g, F, 3));
    for (auto& c : r.cycle)
      std::cout << "point " << c.point.representative().to_string() << " degree " << c.point.degree() << " i " << c.multiplicity << "\n";
    std::cout << "total " << r.total << "\nexpected " << r.expected << "\n" << (r.ok && r.product_bound_ok ? "ok" : "VIOLATED") << "\n";
    if (!r.ok) status = violated("cycle degree differs from the product of degrees");
    if (!r.product_bound_ok) status = violated("a component has i < mu(F) mu(G)");
  });

  int gr_r = 0, gr_n = 0;
  std::uint64_t gr_q = 2;
  auto* grassmann = app.add_subcommand("grassmann", "number of r-dimensional subspaces of F_q^n");
  grassmann->add_option("R", gr_r)->required();
  grassmann->add_option("N", gr_n)->required();
  grassmann->add_option("Q", gr_q)->required();
  grassmann->callback([&] { std::cout << gaussian_count(gr_r, gr_n, gr_q) << "\n"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return status;
}
