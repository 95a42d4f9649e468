#include "forge/cli.hpp"

#include <algorithm>  // for reverse, find
#include <memory>     // for make_shared
#include <optional>   // for optional
#include <ostream>    // for ostream
#include <sstream>    // for istringstream

#include "CLI11.hpp"

#include "forge/constructions.hpp"
#include "forge/endomorphism.hpp"
#include "forge/errors.hpp"
#include "forge/green.hpp"
#include "forge/io.hpp"
#include "forge/universal.hpp"

namespace forge::cli {

  namespace {

    // Raised while reading an input file whose contents are malformed.
    class BadInput : public Error {
     public:
      using Error::Error;
    };

    json load_json(std::string const& path) {
      try {
        return read_json_file(path);
      } catch (ParseError const& e) {
        throw BadInput(path + ": " + e.what());
      }
    }

    Structure load_structure(std::string const& path) {
      auto j = load_json(path);
      try {
        return structure_from_json(j);
      } catch (ParseError const& e) {
        throw BadInput(path + ": " + e.what());
      }
    }

    VertexMap load_map(std::string const& path) {
      auto j = load_json(path);
      try {
        return map_from_json(j);
      } catch (ParseError const& e) {
        throw BadInput(path + ": " + e.what());
      }
    }

    json names_json(std::vector<VertexName> const& names) {
      json out = json::array();
      for (auto const& v : names) {
        out.push_back(v.to_string());
      }
      return out;
    }

    void emit(std::ostream& out, json const& j) {
      out << j.dump(2) << '\n';
    }

    void emit_structure(std::ostream& out, Structure const& s, bool dot) {
      if (dot) {
        out << to_dot(s);
      } else {
        emit(out, to_json(s));
      }
    }

    // Flags shared by every subcommand that builds a limit.
    struct LimitFlags {
      std::string                  seed;
      std::optional<std::string>   delta;
      std::optional<std::uint64_t> window;
      std::uint64_t                stages = 1;
      std::optional<std::uint64_t> cap;
      std::string                  stage_caps;
      bool                         fresh = false;

      void attach(CLI::App* app, bool need_seed = true) {
        auto* s = app->add_option("--seed", seed, "seed structure (JSON file)")
                      ->check(CLI::ExistingFile);
        if (need_seed) {
          s->required();
        }
        app->add_option("--delta", delta,
                        "limit over the lazy complement of seed + L_S; S as \"2,4\" or "
                        "\"2,4|6:3:0,1\"");
        app->add_option("--window", window, "oracle vertices used as stage 0 with --delta");
        app->add_option("--stages", stages, "number of witness stages")
            ->check(CLI::PositiveNumber);
        app->add_option("--cap", cap, "largest subset size receiving a witness");
        app->add_option("--stage-caps", stage_caps, "per-stage caps, e.g. \"2=2,3=none\"");
        app->add_flag("--fresh", fresh, "later stages only witness subsets with a new vertex");
      }

      StagePlan plan() const {
        StagePlan p;
        p.stages     = stages;
        p.subset_cap = cap;
        p.mode       = fresh ? Reenumeration::fresh_only : Reenumeration::every_subset;
        std::istringstream in(stage_caps);
        std::string        item;
        while (std::getline(in, item, ',')) {
          auto eq = item.find('=');
          if (eq == std::string::npos) {
            throw PreconditionError("--stage-caps entry \"" + item + "\" needs the form s=k");
          }
          auto key   = item.substr(0, eq);
          auto value = item.substr(eq + 1);
          try {
            std::uint64_t s = std::stoull(key);
            p.stage_caps[s] = value == "none" ? std::nullopt
                                              : std::optional<std::uint64_t>(std::stoull(value));
          } catch (std::logic_error const&) {
            throw PreconditionError("--stage-caps entry \"" + item + "\" is not numeric");
          }
        }
        return p;
      }

      std::shared_ptr<LazyLimit const> limit() const {
        auto g = load_structure(seed);
        if (!delta) {
          return LazyLimit::over(std::move(g), plan());
        }
        auto oracle = lazy_delta(g, UltimatelyPeriodicSet::parse(*delta));
        return LazyLimit::over(oracle, window.value_or(g.size()), plan());
      }
    };

    ////////////////////////////////////////////////////////////////////////
    // construct
    ////////////////////////////////////////////////////////////////////////

    struct ConstructFlags {
      std::string   name;
      std::string   S;
      std::uint64_t N = 0;
      std::uint64_t K = 1;
      std::uint64_t r = 2;
      std::string   input;
      bool          dot = false;
    };

    Structure construct(ConstructFlags const& f) {
      auto needs_input = [&]() {
        if (f.input.empty()) {
          throw PreconditionError("construct " + f.name + " needs --input");
        }
        return load_structure(f.input);
      };
      auto S = [&]() {
        return IndexSet::parse(f.S);
      };
      if (f.name == "L") {
        return build_L(S(), f.N);
      } else if (f.name == "L-directed") {
        return build_L_directed(S(), f.N);
      } else if (f.name == "Lambda") {
        return build_Lambda(S(), f.N);
      } else if (f.name == "M") {
        return build_M(S(), f.N, f.K);
      } else if (f.name == "N") {
        return build_N(S(), f.N, f.K);
      } else if (f.name == "delta") {
        return delta_construction(needs_input(), S(), f.N);
      } else if (f.name == "dashv") {
        return dashv(needs_input());
      } else if (f.name == "prime") {
        return prime(needs_input());
      } else if (f.name == "blowup") {
        return blowup(needs_input(), f.r);
      } else if (f.name == "complement") {
        return complement(needs_input());
      } else if (f.name == "bipartite-complement") {
        return bipartite_complement(needs_input());
      }
      throw PreconditionError("unknown construction \"" + f.name + "\"");
    }

    ////////////////////////////////////////////////////////////////////////
    // green
    ////////////////////////////////////////////////////////////////////////

    json green_report(Structure const& g, std::string const& kind) {
      auto M = enumerate_endos(g);
      auto G = green_relations(M);
      if (kind == "verify") {
        auto report = verify_monoid_claims(M, G);
        json claims = json::array();
        for (auto const& c : report.claims) {
          claims.push_back({{"claim", c.name},
                            {"checked", c.checked},
                            {"counterexample", c.counterexample ? json(*c.counterexample)
                                                                : json(nullptr)}});
        }
        return {{"ok", report.ok()}, {"monoid_size", report.monoid_size}, {"claims", claims}};
      }
      if (kind == "idempotents") {
        json out = json::array();
        for (auto e : idempotents(M)) {
          out.push_back({{"map", to_json(M.as_map(e))},
                         {"rank", M.rank(e)},
                         {"group_order", maximal_subgroup(M, e).order()}});
        }
        return {{"monoid_size", M.size()}, {"idempotents", out}};
      }
      // one Schützenberger group per H-class, in class order
      std::vector<std::size_t> reps;
      for (std::size_t f = 0; f < M.size(); ++f) {
        if (G.H[f] == reps.size()) {
          reps.push_back(f);
        }
      }
      std::vector<SchutzGroup> schutz;
      for (auto f : reps) {
        schutz.push_back(schutzenberger(M, G, f));
      }
      if (kind == "schutz") {
        json out = json::array();
        for (std::size_t h = 0; h < reps.size(); ++h) {
          out.push_back({{"h_class", h},
                         {"representative", to_json(M.as_map(reps[h]))},
                         {"size", schutz[h].h_class.size()},
                         {"stabiliser_size", schutz[h].stabiliser.size()},
                         {"order", schutz[h].order()},
                         {"cycle_profile", schutz[h].cycle_profile()}});
        }
        return {{"monoid_size", M.size()}, {"schutzenberger", out}};
      }
      if (kind != "classes") {
        throw PreconditionError("unknown report \"" + kind + "\"");
      }
      json d_classes = json::array();
      for (std::size_t d = 0; d < G.D_count; ++d) {
        json cells = json::array();
        for (std::size_t h = 0; h < reps.size(); ++h) {
          auto f = reps[h];
          if (G.D[f] != d) {
            continue;
          }
          bool is_group = std::any_of(schutz[h].h_class.begin(), schutz[h].h_class.end(),
                                      [&](std::size_t x) { return G.idempotent[x]; });
          cells.push_back({{"L", G.L[f]},
                           {"R", G.R[f]},
                           {"size", schutz[h].h_class.size()},
                           {"is_group", is_group},
                           {"schutz_order", schutz[h].order()}});
        }
        d_classes.push_back(cells);
      }
      json elements = json::array();
      for (std::size_t f = 0; f < M.size(); ++f) {
        elements.push_back({{"map", to_json(M.as_map(f))},
                            {"L", G.L[f]},
                            {"R", G.R[f]},
                            {"H", G.H[f]},
                            {"D", G.D[f]},
                            {"J", G.J[f]},
                            {"idempotent", bool(G.idempotent[f])},
                            {"regular", bool(G.regular[f])}});
      }
      return {{"monoid_size", M.size()},
              {"counts",
               {{"L", G.L_count},
                {"R", G.R_count},
                {"H", G.H_count},
                {"D", G.D_count},
                {"J", G.J_count}}},
              {"d_classes", d_classes},
              {"elements", elements}};
    }

    json partial_hom_json(PartialHom const& h) {
      return {{"stage", h.stage},
              {"domain", to_json(h.domain)},
              {"map", to_json(h.map)},
              {"homomorphism", check_homomorphism(h)},
              {"injective", is_injective(h.map)}};
    }

    std::vector<IndexSet> parse_index_sets(std::string const& text) {
      std::vector<IndexSet> out;
      std::istringstream    in(text);
      std::string           item;
      while (std::getline(in, item, ';')) {
        out.push_back(IndexSet::parse(item));
      }
      return out;
    }

    struct PairFlags {
      std::string                  S;
      std::uint64_t                stages = 1;
      std::uint64_t                cap    = 2;
      std::optional<std::uint64_t> path_length;

      void attach(CLI::App* app, std::string const& prefix) {
        app->add_option("--S", S, "index sets per stage, separated by ';'")->required();
        app->add_option("--" + prefix + "stages", stages, "stages of the witness pair");
        app->add_option("--" + prefix + "cap", cap, "largest subset receiving an x vertex");
        app->add_option("--path-length", path_length, "truncation of each L_S copy");
      }

      SchutzPair build(Structure const& g) const {
        SchutzCaps caps;
        caps.subset_cap  = cap;
        caps.path_length = path_length;
        return schutz_pair(g, parse_index_sets(S), stages, caps);
      }
    };

  }  // namespace

  int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err) {
    static std::vector<std::string> const subcommands{
        "construct", "stage",       "ec-witness", "extend",    "verify-idem",
        "ac-check",  "green",       "schutz-pair", "greedy-hom"};
    if (!args.empty() && !args.front().empty() && args.front()[0] != '-'
        && std::find(subcommands.begin(), subcommands.end(), args.front())
               == subcommands.end()) {
      err << "forge: unknown subcommand \"" << args.front() << "\"\n";
      return kExitUnknown;
    }

    CLI::App app{"Finite and lazily generated universal graphs, their endomorphisms and "
                 "Green's relations",
                 "forge"};
    app.require_subcommand(1);

    ConstructFlags cf;
    auto*          construct_cmd = app.add_subcommand("construct", "build a gadget");
    construct_cmd
        ->add_option("name", cf.name,
                     "L, L-directed, Lambda, M, N, delta, dashv, prime, blowup, complement "
                     "or bipartite-complement")
        ->required();
    construct_cmd->add_option("--S", cf.S, "index set, e.g. 2,4,5");
    construct_cmd->add_option("--N", cf.N, "truncation");
    construct_cmd->add_option("--K", cf.K, "number of apex vertices");
    construct_cmd->add_option("--r", cf.r, "blow-up factor");
    construct_cmd->add_option("--input", cf.input, "input structure")->check(CLI::ExistingFile);
    construct_cmd->add_flag("--dot", cf.dot, "Graphviz output");

    LimitFlags                   stage_flags;
    std::optional<std::uint64_t> stage_n;
    std::optional<std::string>   stage_kind;
    bool                         stage_dot = false;
    auto* stage_cmd = app.add_subcommand("stage", "the finite structure up to a stage");
    stage_flags.attach(stage_cmd);
    stage_cmd->add_option("--kind", stage_kind, "expected seed kind")
        ->check(CLI::IsMember({"graph", "digraph", "bipartite"}));
    stage_cmd->add_option("--stage", stage_n, "stage to print (default: --stages)");
    stage_cmd->add_flag("--dot", stage_dot, "Graphviz output");

    LimitFlags               ec_flags;
    std::string              ec_u, ec_v, ec_in, ec_both;
    std::optional<int>       ec_part;
    auto* ec_cmd = app.add_subcommand("ec-witness", "one-point extension witness");
    ec_flags.attach(ec_cmd);
    ec_cmd->add_option("--u", ec_u, "vertices the witness is adjacent to (out-arcs for "
                                    "digraphs)");
    ec_cmd->add_option("--v", ec_v, "vertices the witness is not adjacent to");
    ec_cmd->add_option("--in", ec_in, "digraphs: vertices with an arc to the witness only");
    ec_cmd->add_option("--both", ec_both, "digraphs: vertices with arcs both ways");
    ec_cmd->add_option("--part", ec_part, "bipartite: part of the witness")
        ->check(CLI::Range(0, 1));

    LimitFlags                   ex_flags;
    std::string                  ex_mode = "generic";
    std::optional<std::string>   ex_seed_map;
    std::string                  ex_choices = "0";
    std::optional<std::uint64_t> ex_stage;
    bool                         ex_lax = false;
    auto* extend_cmd = app.add_subcommand("extend", "extend a seed map to the limit");
    auto* idem_cmd   = app.add_subcommand("verify-idem", "check an idempotent extension");
    for (auto* cmd : {extend_cmd, idem_cmd}) {
      ex_flags.attach(cmd);
      cmd->add_option("--choices", ex_choices, "choice sequence, e.g. 0,1,0 or periodic:0,1");
      cmd->add_option("--stage", ex_stage, "restriction stage (default: --stages)");
      cmd->add_flag("--non-strict", ex_lax, "ignore earlier witnesses of the same stage");
    }
    extend_cmd->add_option("--mode", ex_mode, "generic, image, auto or idem")
        ->check(CLI::IsMember({"generic", "image", "auto", "idem"}));
    extend_cmd->add_option("--seed-map", ex_seed_map, "seed map (JSON object)")
        ->check(CLI::ExistingFile);

    std::string   ac_file;
    std::uint64_t ac_min = 1;
    std::optional<std::size_t> ac_cap;
    auto* ac_cmd = app.add_subcommand("ac-check", "algebraic closure check of a finite "
                                                  "structure");
    ac_cmd->add_option("file", ac_file, "structure")->required()->check(CLI::ExistingFile);
    ac_cmd->add_option("--min-witnesses", ac_min, "required common neighbours");
    ac_cmd->add_option("--cap", ac_cap, "largest subset size checked");

    std::string green_file, green_kind = "classes";
    auto* green_cmd = app.add_subcommand("green", "Green's relations of End");
    green_cmd->add_option("file", green_file, "structure")->required()->check(
        CLI::ExistingFile);
    green_cmd->add_option("--report", green_kind, "classes, idempotents, schutz or verify")
        ->check(CLI::IsMember({"classes", "idempotents", "schutz", "verify"}));

    std::string sp_seed;
    PairFlags   sp_flags;
    bool        sp_dot = false;
    auto* sp_cmd = app.add_subcommand("schutz-pair", "the (E*, E_0) witness pair");
    sp_cmd->add_option("--seed", sp_seed, "base structure")->required()->check(
        CLI::ExistingFile);
    sp_flags.attach(sp_cmd, "");
    sp_cmd->add_flag("--dot", sp_dot, "Graphviz output of E*");

    std::string                gh_seed, gh_source;
    std::optional<std::string> gh_pins;
    PairFlags                  gh_pair;
    std::uint64_t              gh_stages = 2;
    std::uint64_t              gh_cap    = 6;
    auto* gh_cmd = app.add_subcommand("greedy-hom", "greedy injective map into the pair's "
                                                    "limit");
    gh_cmd->add_option("--seed", gh_seed, "base structure of the pair")->required()->check(
        CLI::ExistingFile);
    gh_cmd->add_option("--source", gh_source, "source structure")->required()->check(
        CLI::ExistingFile);
    gh_cmd->add_option("--pins", gh_pins, "fixed images (JSON object)")->check(
        CLI::ExistingFile);
    gh_pair.attach(gh_cmd, "pair-");
    gh_cmd->add_option("--stages", gh_stages, "witness stages of the target limit");
    gh_cmd->add_option("--cap", gh_cap, "subset cap of the target limit");

    try {
      std::vector<std::string> reversed(args.rbegin(), args.rend());
      app.parse(reversed);
    } catch (CLI::ParseError const& e) {
      int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
      if (construct_cmd->parsed()) {
        emit_structure(out, construct(cf), cf.dot);
      } else if (stage_cmd->parsed()) {
        auto L = stage_flags.limit();
        if (stage_kind && kind_from_string(*stage_kind) != L->kind()) {
          throw PreconditionError("seed is a " + to_string(L->kind()) + ", not a "
                                  + *stage_kind);
        }
        emit_structure(out, L->stage_structure(stage_n.value_or(stage_flags.stages)),
                       stage_dot);
      } else if (ec_cmd->parsed()) {
        auto       L = ec_flags.limit();
        auto       U = parse_name_list(ec_u);
        auto       V = parse_name_list(ec_v);
        VertexName w;
        if (L->kind() == Kind::digraph) {
          w = find_ec_witness(*L, DigraphType{U, parse_name_list(ec_in),
                                              parse_name_list(ec_both), V});
        } else if (L->kind() == Kind::bipartite) {
          if (!ec_part) {
            throw PreconditionError("bipartite witnesses need --part");
          }
          w = find_ec_witness_bipartite(*L, *ec_part, U, V);
        } else {
          if (!ec_in.empty() || !ec_both.empty()) {
            throw PreconditionError("--in and --both apply to digraphs only");
          }
          w = find_ec_witness(*L, U, V);
        }
        emit(out, {{"witness", w.to_string()}, {"stage", L->stage_of(w)}});
      } else if (extend_cmd->parsed() || idem_cmd->parsed()) {
        auto L       = ex_flags.limit();
        auto choices = ChoiceSequence::parse(ex_choices);
        bool strict  = !ex_lax;
        auto mode    = idem_cmd->parsed() ? std::string("idem") : ex_mode;
        auto seed_map = [&]() {
          if (!ex_seed_map) {
            throw PreconditionError("--mode " + mode + " needs --seed-map");
          }
          return load_map(*ex_seed_map);
        };
        std::optional<LimitEndomorphism> e;
        if (mode == "generic") {
          e = extend_hom(L, seed_map(), choices, strict);
        } else if (mode == "image") {
          auto oracle = L->oracle() ? L->oracle()
                                    : std::make_shared<FiniteOracle const>(L->seed());
          e = extend_hom_image_preserving(L, seed_map(), oracle, choices, strict);
        } else if (mode == "auto") {
          e = extend_automorphism(L, seed_map());
        } else {
          e = idempotent_onto(L, choices, strict);
        }
        auto n = ex_stage.value_or(ex_flags.stages);
        if (idem_cmd->parsed()) {
          auto report = verify_idempotent(*e, n);
          emit(out, {{"idempotent", report.ok},
                     {"checked", report.checked},
                     {"counterexample", report.counterexample
                                            ? json(report.counterexample->to_string())
                                            : json(nullptr)}});
          return report.ok ? kExitOk : kExitClaimFails;
        }
        emit(out, partial_hom_json(restrict(*e, n)));
      } else if (ac_cmd->parsed()) {
        auto      g = load_structure(ac_file);
        AcOptions options;
        options.min_witnesses = ac_min;
        options.subset_cap    = ac_cap;
        auto report           = ac_check(g, options);
        emit(out, {{"ok", report.ok},
                   {"failing_subset", names_json(report.failing_subset)},
                   {"witnesses", report.witnesses},
                   {"subsets_checked", report.subsets_checked}});
        return report.ok ? kExitOk : kExitClaimFails;
      } else if (green_cmd->parsed()) {
        auto report = green_report(load_structure(green_file), green_kind);
        emit(out, report);
        if (green_kind == "verify" && !report.at("ok").get<bool>()) {
          return kExitClaimFails;
        }
      } else if (sp_cmd->parsed()) {
        auto pair = sp_flags.build(load_structure(sp_seed));
        if (sp_dot) {
          out << to_dot(pair.e_star);
        } else {
          json paths = json::array(), xs = json::array();
          for (auto const& p : pair.path_vertices) {
            paths.push_back(names_json(p));
          }
          for (auto const& x : pair.x_vertices) {
            xs.push_back(names_json(x));
          }
          emit(out, {{"e_star", to_json(pair.e_star)},
                     {"e_zero", to_json(pair.e_zero)},
                     {"path_vertices", paths},
                     {"x_vertices", xs}});
        }
      } else if (gh_cmd->parsed()) {
        auto      pair = gh_pair.build(load_structure(gh_seed));
        StagePlan plan;
        plan.stages     = gh_stages;
        plan.subset_cap = gh_cap;
        SchutzTarget target(std::move(pair), plan);
        auto         source = load_structure(gh_source);
        auto         result = greedy_injective_hom(source, target,
                                                   gh_pins ? load_map(*gh_pins) : VertexMap{});
        json         j      = partial_hom_json(result.hom);
        j["discrepancy"]    = result.discrepancy
                                  ? json::array({result.discrepancy->first.to_string(),
                                                 result.discrepancy->second.to_string()})
                                  : json(nullptr);
        emit(out, j);
      }
    } catch (BadInput const& e) {
      err << "forge: malformed input: " << e.what() << '\n';
      return kExitBadInput;
    } catch (CapExceeded const& e) {
      err << "forge: cap exceeded: " << e.what() << '\n';
      return kExitExhausted;
    } catch (CoverageError const& e) {
      err << "forge: coverage exhausted: " << e.what() << '\n';
      return kExitExhausted;
    } catch (Error const& e) {
      err << "forge: " << e.what() << '\n';
      return kExitInvalid;
    }
    return kExitOk;
  }

}  // namespace forge::cli
