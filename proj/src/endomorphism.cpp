#include "forge/endomorphism.hpp"

#include <algorithm>      // for sort, max, min
#include <array>          // for array
#include <mutex>          // for mutex, lock_guard
#include <set>            // for set
#include <unordered_map>  // for unordered_map

#include "forge/errors.hpp"  // for PreconditionError, CoverageError, Error

namespace forge {

  ////////////////////////////////////////////////////////////////////////
  // ChoiceSequence
  ////////////////////////////////////////////////////////////////////////

  namespace {
    std::vector<std::uint64_t> parse_numbers(std::string const& text) {
      std::vector<std::uint64_t> out;
      std::size_t                pos = 0;
      while (pos <= text.size()) {
        auto        comma = std::min(text.find(',', pos), text.size());
        std::string item  = text.substr(pos, comma - pos);
        std::size_t used  = 0;
        try {
          out.push_back(std::stoull(item, &used));
        } catch (std::logic_error const&) {
          used = std::string::npos;
        }
        if (used != item.size() || item.empty() || item[0] == '-') {
          throw ParseError("bad choice list \"" + text + "\"");
        }
        pos = comma + 1;
      }
      return out;
    }
  }  // namespace

  ChoiceSequence ChoiceSequence::constant(std::uint64_t j) {
    ChoiceSequence c;
    c._fallback = j;
    return c;
  }

  ChoiceSequence ChoiceSequence::periodic(std::vector<std::uint64_t> pattern) {
    if (pattern.empty()) {
      throw PreconditionError("a periodic choice sequence needs a non-empty pattern");
    }
    ChoiceSequence c;
    c._values   = std::move(pattern);
    c._periodic = true;
    return c;
  }

  ChoiceSequence ChoiceSequence::prefix(std::vector<std::uint64_t> values,
                                        std::uint64_t              fallback) {
    ChoiceSequence c;
    c._values   = std::move(values);
    c._fallback = fallback;
    return c;
  }

  ChoiceSequence ChoiceSequence::parse(std::string const& text) {
    auto           semi = text.find(';');
    std::string    head = text.substr(0, semi);
    ChoiceSequence c;
    if (head.rfind("periodic:", 0) == 0) {
      c = periodic(parse_numbers(head.substr(9)));
    } else if (head.find(',') != std::string::npos) {
      c = prefix(parse_numbers(head));
    } else if (!head.empty()) {
      c = constant(parse_numbers(head)[0]);
    }
    while (semi != std::string::npos) {
      auto        next = text.find(';', semi + 1);
      std::string item = text.substr(semi + 1, next == std::string::npos ? next : next - semi - 1);
      auto        dot  = item.find('.');
      auto        eq   = item.find('=');
      if (dot == std::string::npos || eq == std::string::npos || eq < dot) {
        throw ParseError("choice overrides look like stage.index=value, got \"" + item + "\"");
      }
      auto s = parse_numbers(item.substr(0, dot));
      auto i = parse_numbers(item.substr(dot + 1, eq - dot - 1));
      auto j = parse_numbers(item.substr(eq + 1));
      c.override_at(s[0], i[0], j[0]);
      semi = next;
    }
    return c;
  }

  ChoiceSequence& ChoiceSequence::override_at(std::uint64_t stage,
                                              std::uint64_t index,
                                              std::uint64_t j) {
    _overrides[{stage, index}] = j;
    return *this;
  }

  std::uint64_t ChoiceSequence::operator()(std::uint64_t stage,
                                           std::uint64_t index,
                                           std::uint64_t serial) const {
    if (auto it = _overrides.find({stage, index}); it != _overrides.end()) {
      return it->second;
    }
    if (_periodic) {
      return _values[serial % _values.size()];
    }
    return serial < _values.size() ? _values[serial] : _fallback;
  }

  std::string ChoiceSequence::to_string() const {
    std::string out;
    if (_periodic) {
      out = "periodic:";
    }
    for (std::size_t i = 0; i < _values.size(); ++i) {
      out += (i == 0 ? "" : ",") + std::to_string(_values[i]);
    }
    if (!_periodic) {
      if (_values.empty()) {
        out = std::to_string(_fallback);
      } else if (_values.size() == 1 || _fallback != 0) {
        // keep the prefix form recognisable
        out += "," + std::to_string(_fallback);
      }
    }
    for (auto const& [key, j] : _overrides) {
      out += ";" + std::to_string(key.first) + "." + std::to_string(key.second) + "="
             + std::to_string(j);
    }
    return out;
  }

  std::string to_string(ExtensionMode m) {
    switch (m) {
      case ExtensionMode::generic:
        return "generic";
      case ExtensionMode::image_preserving:
        return "image";
      case ExtensionMode::automorphism_lift:
        return "auto";
      case ExtensionMode::idempotent:
        return "idem";
      case ExtensionMode::composite:
        return "composite";
    }
    return {};
  }

  ////////////////////////////////////////////////////////////////////////
  // LimitEndomorphism
  ////////////////////////////////////////////////////////////////////////

  struct LimitEndomorphism::Impl {
    virtual ~Impl() = default;
    virtual VertexName eval(VertexName const& v) const = 0;

    std::shared_ptr<LazyLimit const> L;
    ExtensionMode                    mode = ExtensionMode::generic;
  };

  LimitEndomorphism::LimitEndomorphism(std::shared_ptr<Impl const> impl)
      : _impl(std::move(impl)) {}

  VertexName LimitEndomorphism::operator()(VertexName const& v) const {
    return _impl->eval(v);
  }

  std::shared_ptr<LazyLimit const> const& LimitEndomorphism::base() const {
    return _impl->L;
  }

  ExtensionMode LimitEndomorphism::mode() const {
    return _impl->mode;
  }

  namespace {
    std::string describe(std::vector<VertexName> const& vs) {
      std::string out = "{";
      for (std::size_t i = 0; i < vs.size(); ++i) {
        out += (i == 0 ? "" : ",") + vs[i].to_string();
      }
      return out + "}";
    }

    // Required arcs from a candidate t to a vertex x: t -> x and x -> t.
    constexpr std::uint8_t kNeedOut = 1;
    constexpr std::uint8_t kNeedIn  = 2;

    struct ExtensionImpl : LimitEndomorphism::Impl {
      std::optional<VertexMap>        table;
      SeedRule                        rule;
      ChoiceSequence                  choices;
      bool                            strict = true;
      std::shared_ptr<ACOracle const> image;
      std::array<int, 2>              sigma{0, 1};

      mutable std::mutex                                              mu;
      mutable std::unordered_map<VertexName, VertexName, VertexNameHash> memo;
      // images of the witnesses 0, 1, .. of each stage, for strict mode
      mutable std::map<std::uint64_t, std::vector<VertexName>> prefix;

      VertexName eval(VertexName const& v) const override {
        {
          std::lock_guard<std::mutex> lock(mu);
          if (auto it = memo.find(v); it != memo.end()) {
            return it->second;
          }
        }
        std::uint64_t s = L->stage_of(v);
        VertexName    value;
        if (s == 0) {
          value = seed_value(v);
        } else if (mode == ExtensionMode::automorphism_lift) {
          value = lift(v, s);
        } else if (strict) {
          value = strict_value(v, s);
        } else {
          value = compute(v, s, {});
        }
        std::lock_guard<std::mutex> lock(mu);
        memo.emplace(v, value);
        return value;
      }

      VertexName seed_value(VertexName const& v) const {
        if (mode == ExtensionMode::idempotent) {
          return v;
        }
        if (rule) {
          return rule(v);
        }
        if (!table->defines(v)) {
          throw CoverageError("the seed map is not defined at " + v.to_string());
        }
        return (*table)(v);
      }

      VertexName strict_value(VertexName const& v, std::uint64_t s) const {
        while (true) {
          std::vector<VertexName> done;
          {
            std::lock_guard<std::mutex> lock(mu);
            done = prefix[s];
          }
          if (done.size() > v.index()) {
            return done[v.index()];
          }
          VertexName w     = VertexName::witness(L->offset() + s, done.size());
          VertexName value = compute(w, s, done);
          std::lock_guard<std::mutex> lock(mu);
          auto& p = prefix[s];
          if (p.size() == done.size()) {
            p.push_back(value);
            memo.emplace(w, value);
          }
        }
      }

      // earlier: images of the earlier witnesses of this stage (strict).
      VertexName compute(VertexName const&              w,
                         std::uint64_t                  s,
                         std::vector<VertexName> const& earlier) const {
        Item const it = L->item(w);
        std::map<VertexName, std::uint8_t> needs;
        Kind const                         kind = L->kind();
        for (std::size_t t = 0; t < it.members.size(); ++t) {
          VertexName   x = eval(it.members[t]);
          std::uint8_t need
              = kind != Kind::digraph        ? kNeedOut
                : it.labels[t] == arc_out    ? kNeedOut
                : it.labels[t] == arc_in     ? kNeedIn
                                             : std::uint8_t(kNeedOut | kNeedIn);
          needs[x] |= need;
        }
        for (std::size_t i = 0; i < earlier.size(); ++i) {
          if (kind == Kind::bipartite
              && L->part(VertexName::witness(L->offset() + s, i)) == it.part) {
            continue;  // same part: never adjacent
          }
          needs[earlier[i]] |= kind == Kind::digraph ? (kNeedOut | kNeedIn) : kNeedOut;
        }
        int const     part = kind == Kind::bipartite ? sigma[it.part] : 0;
        std::uint64_t j    = choices(s, w.index(), L->serial(w));

        if (image) {
          std::vector<VertexName> A;
          for (auto const& [x, need] : needs) {
            A.push_back(x);
          }
          auto m = image->multiplicity(A, part);
          if (m && j >= *m) {
            throw PreconditionError(
                "the image has only " + std::to_string(*m) + " common neighbour(s) of "
                + describe(A) + " but choice " + std::to_string(j) + " was requested at "
                + w.to_string()
                + "; a finite image such as K_{1,1} admits a single extension, so only "
                  "choice 0 is possible there");
          }
          return image->witness(A, j, part);
        }
        return search(needs, part, j, w);
      }

      bool qualifies(VertexName const&                         t,
                     int                                       part,
                     std::map<VertexName, std::uint8_t> const& needs) const {
        if (L->kind() == Kind::bipartite && L->part(t) != part) {
          return false;
        }
        for (auto const& [x, need] : needs) {
          if ((need & kNeedOut) && !L->adjacent(t, x)) {
            return false;
          }
          if ((need & kNeedIn) && !L->adjacent(x, t)) {
            return false;
          }
        }
        return true;
      }

      VertexName search(std::map<VertexName, std::uint8_t> const& needs,
                        int                                       part,
                        std::uint64_t                             j,
                        VertexName const&                         w) const {
        std::uint64_t const     jj = j;
        std::uint64_t           hi = 0;
        VertexName              top;
        std::vector<Constraint> cons;
        for (auto const& [x, need] : needs) {
          std::uint64_t sx = L->stage_of(x);
          if (sx > hi) {
            hi  = sx;
            top = x;
          }
          std::uint8_t mask = L->kind() != Kind::digraph ? label_bit(0)
                              : need == kNeedOut
                                  ? std::uint8_t(label_bit(arc_out) | label_bit(arc_both))
                              : need == kNeedIn
                                  ? std::uint8_t(label_bit(arc_in) | label_bit(arc_both))
                                  : label_bit(arc_both);
          cons.push_back({x, mask});
        }
        // vertices before stage hi: adjacency to top is owned by top
        std::vector<VertexName> early
            = hi == 0 ? L->seed().vertices() : L->item(top).members;
        for (auto const& t : early) {
          if (qualifies(t, part, needs)) {
            if (j == 0) {
              return t;
            }
            --j;
          }
        }
        for (std::uint64_t s = hi + 1; s <= L->stages(); ++s) {
          std::uint64_t c = L->count_items(s, part, cons, {});
          if (j < c) {
            return *L->nth_item(s, part, cons, {}, j);
          }
          j -= c;
        }
        std::vector<VertexName> targets;
        for (auto const& [x, need] : needs) {
          targets.push_back(x);
        }
        throw CoverageError("no vertex number " + std::to_string(jj) + " adjacent to "
                            + describe(targets) + " (needed for " + w.to_string()
                            + ") within the plan's " + std::to_string(L->stages())
                            + " stages");
      }

      VertexName lift(VertexName const& w, std::uint64_t s) const {
        Item const                                it = L->item(w);
        std::vector<std::pair<VertexName, std::uint8_t>> mapped;
        for (std::size_t t = 0; t < it.members.size(); ++t) {
          mapped.emplace_back(eval(it.members[t]), it.labels[t]);
        }
        std::sort(mapped.begin(), mapped.end());
        Item target;
        target.part = L->kind() == Kind::bipartite ? sigma[it.part] : 0;
        for (auto const& [x, l] : mapped) {
          target.members.push_back(x);
          target.labels.push_back(l);
        }
        auto image_w = L->witness_for(s, target);
        if (!image_w) {
          throw Error("the automorphism lift left the schedule at " + w.to_string());
        }
        return *image_w;
      }
    };

    struct CompositeImpl : LimitEndomorphism::Impl {
      LimitEndomorphism first;
      LimitEndomorphism second;

      CompositeImpl(LimitEndomorphism a, LimitEndomorphism b)
          : first(std::move(a)), second(std::move(b)) {}

      VertexName eval(VertexName const& v) const override {
        return second(first(v));
      }
    };

    // Part map induced by a seed map; parts absent from the seed go to the
    // other part's complement.
    std::array<int, 2> part_map(LazyLimit const&                                L,
                                std::function<VertexName(VertexName const&)> const& f) {
      std::array<std::optional<int>, 2> sigma;
      if (L.kind() == Kind::bipartite) {
        for (auto const& v : L.seed().vertices()) {
          int p = L.seed().part(v);
          int q = L.part(f(v));
          if (sigma[p] && *sigma[p] != q) {
            throw PreconditionError("the seed map does not preserve the partition");
          }
          sigma[p] = q;
        }
      }
      if (!sigma[0] && !sigma[1]) {
        return {0, 1};
      }
      if (!sigma[0]) {
        sigma[0] = 1 - *sigma[1];
      }
      if (!sigma[1]) {
        sigma[1] = 1 - *sigma[0];
      }
      return {*sigma[0], *sigma[1]};
    }

    void check_seed_hom(LazyLimit const&                                    L,
                        std::function<VertexName(VertexName const&)> const& f) {
      Structure const& seed = L.seed();
      for (auto const& v : seed.vertices()) {
        if (!L.contains(f(v))) {
          throw PreconditionError("the seed map sends " + v.to_string() + " to "
                                  + f(v).to_string() + ", which is not a vertex of the limit");
        }
      }
      for (auto const& [u, v] : seed.edges()) {
        if (!L.adjacent(f(u), f(v))) {
          throw PreconditionError("the seed map is not a homomorphism: the edge "
                                  + u.to_string() + " - " + v.to_string()
                                  + " is not preserved");
        }
      }
      part_map(L, f);
    }

    std::function<VertexName(VertexName const&)> as_function(VertexMap const& m) {
      return [&m](VertexName const& v) {
        if (!m.defines(v)) {
          throw PreconditionError("the seed map is not defined at " + v.to_string());
        }
        return m(v);
      };
    }
  }  // namespace

  LimitEndomorphism extend_hom(std::shared_ptr<LazyLimit const> L,
                               VertexMap const&                 f0,
                               ChoiceSequence                   choices,
                               bool                             strict) {
    check_seed_hom(*L, as_function(f0));
    auto impl     = std::make_shared<ExtensionImpl>();
    impl->sigma   = part_map(*L, as_function(f0));
    impl->L       = std::move(L);
    impl->mode    = ExtensionMode::generic;
    impl->table   = f0;
    impl->choices = std::move(choices);
    impl->strict  = strict;
    return LimitEndomorphism(impl);
  }

  LimitEndomorphism extend_hom(std::shared_ptr<LazyLimit const> L,
                               SeedRule                         f0,
                               ChoiceSequence                   choices,
                               bool                             strict) {
    check_seed_hom(*L, f0);
    auto impl     = std::make_shared<ExtensionImpl>();
    impl->sigma   = part_map(*L, f0);
    impl->L       = std::move(L);
    impl->mode    = ExtensionMode::generic;
    impl->rule    = std::move(f0);
    impl->choices = std::move(choices);
    impl->strict  = strict;
    return LimitEndomorphism(impl);
  }

  namespace {
    void check_image(LazyLimit const& L, ACOracle const& image) {
      if (L.oracle().get() == &image) {
        return;
      }
      auto n = image.size();
      if (!n) {
        throw PreconditionError("an infinite image oracle must be the limit's own oracle");
      }
      for (std::uint64_t i = 0; i < *n; ++i) {
        VertexName v = image.vertex(i);
        if (!L.contains(v) || L.stage_of(v) != 0) {
          throw PreconditionError("the image vertex " + v.to_string()
                                  + " is not a seed vertex of the limit");
        }
      }
    }
  }  // namespace

  LimitEndomorphism extend_hom_image_preserving(std::shared_ptr<LazyLimit const> L,
                                                VertexMap const&                 f0,
                                                std::shared_ptr<ACOracle const>  image,
                                                ChoiceSequence                   choices,
                                                bool                             strict) {
    check_image(*L, *image);
    check_seed_hom(*L, as_function(f0));
    for (auto const& v : L->seed().vertices()) {
      if (!image->contains(f0(v))) {
        throw PreconditionError("the seed map sends " + v.to_string()
                                + " outside the image oracle");
      }
    }
    auto impl     = std::make_shared<ExtensionImpl>();
    impl->sigma   = part_map(*L, as_function(f0));
    impl->L       = std::move(L);
    impl->mode    = ExtensionMode::image_preserving;
    impl->table   = f0;
    impl->choices = std::move(choices);
    impl->strict  = strict;
    impl->image   = std::move(image);
    return LimitEndomorphism(impl);
  }

  LimitEndomorphism extend_automorphism(std::shared_ptr<LazyLimit const> L,
                                        VertexMap const&                 g0) {
    Structure const& seed = L->seed();
    for (auto const& v : seed.vertices()) {
      if (!g0.defines(v) || !seed.contains(g0(v))) {
        throw PreconditionError("the seed map must send every seed vertex into the seed");
      }
    }
    VertexMap restricted;
    for (auto const& v : seed.vertices()) {
      restricted.set(v, g0(v));
    }
    if (!is_embedding(seed, seed, restricted)) {
      throw PreconditionError("the seed map is not an automorphism of the seed");
    }
    auto impl   = std::make_shared<ExtensionImpl>();
    impl->sigma = part_map(*L, as_function(restricted));
    impl->L     = std::move(L);
    impl->mode  = ExtensionMode::automorphism_lift;
    impl->table = restricted;
    return LimitEndomorphism(impl);
  }

  LimitEndomorphism idempotent_onto(std::shared_ptr<LazyLimit const> L,
                                    ChoiceSequence                   choices,
                                    bool                             strict) {
    std::shared_ptr<ACOracle const> image = L->oracle();
    if (!image) {
      image = std::make_shared<FiniteOracle const>(L->seed());
    }
    auto impl     = std::make_shared<ExtensionImpl>();
    impl->L       = std::move(L);
    impl->mode    = ExtensionMode::idempotent;
    impl->choices = std::move(choices);
    impl->strict  = strict;
    impl->image   = std::move(image);
    return LimitEndomorphism(impl);
  }

  LimitEndomorphism compose(LimitEndomorphism const& e1, LimitEndomorphism const& e2) {
    if (e1.base() != e2.base()) {
      throw PreconditionError("compose needs two endomorphisms of the same limit");
    }
    auto impl  = std::make_shared<CompositeImpl>(e1, e2);
    impl->L    = e1.base();
    impl->mode = ExtensionMode::composite;
    return LimitEndomorphism(impl);
  }

  PartialHom restrict(LimitEndomorphism const& e, std::uint64_t n, std::uint64_t limit) {
    PartialHom h;
    h.domain = e.base()->stage_structure(n, limit);
    h.target = e.base();
    h.stage  = n;
    for (auto const& v : h.domain.vertices()) {
      h.map.set(v, e(v));
    }
    return h;
  }

  namespace {
    bool images_in_target(PartialHom const& h) {
      for (auto const& v : h.domain.vertices()) {
        if (!h.map.defines(v) || !h.target->contains(h.map(v))) {
          return false;
        }
      }
      return true;
    }

    bool parts_preserved(PartialHom const& h, bool both_ways) {
      if (h.domain.kind() != Kind::bipartite) {
        return true;
      }
      std::array<std::optional<int>, 2> sigma;
      for (auto const& v : h.domain.vertices()) {
        int p = h.domain.part(v);
        int q = h.target->part(h.map(v));
        if (sigma[p] && *sigma[p] != q) {
          return false;
        }
        sigma[p] = q;
      }
      return !both_ways || !sigma[0] || !sigma[1] || *sigma[0] != *sigma[1];
    }
  }  // namespace

  bool check_homomorphism(PartialHom const& h) {
    if (h.domain.kind() != h.target->kind() || !images_in_target(h)) {
      return false;
    }
    for (auto const& [u, v] : h.domain.edges()) {
      if (!h.target->adjacent(h.map(u), h.map(v))) {
        return false;
      }
    }
    return parts_preserved(h, false);
  }

  bool check_embedding(PartialHom const& h) {
    if (!check_homomorphism(h) || !is_injective(h.map) || !parts_preserved(h, true)) {
      return false;
    }
    for (std::size_t a = 0; a < h.domain.size(); ++a) {
      for (std::size_t b = 0; b < h.domain.size(); ++b) {
        if (a != b
            && h.domain.adjacent(a, b)
                   != h.target->adjacent(h.map(h.domain.vertex(a)),
                                         h.map(h.domain.vertex(b)))) {
          return false;
        }
      }
    }
    return true;
  }

  IdempotenceReport verify_idempotent(LimitEndomorphism const& e,
                                      std::uint64_t            n,
                                      std::uint64_t            limit) {
    IdempotenceReport report;
    for (auto const& v : e.base()->vertices_up_to(n, limit)) {
      VertexName fv = e(v);
      ++report.checked;
      if (e(fv) != fv) {
        report.ok             = false;
        report.counterexample = v;
        return report;
      }
    }
    return report;
  }

  ////////////////////////////////////////////////////////////////////////
  // SchutzTarget and the greedy map
  ////////////////////////////////////////////////////////////////////////

  SchutzTarget::SchutzTarget(SchutzPair pair, StagePlan plan)
      : _pair(std::move(pair)), _limit(LazyLimit::over(_pair.e_star, std::move(plan))) {}

  bool SchutzTarget::adjacent_star(VertexName const& u, VertexName const& v) const {
    return _limit->adjacent(u, v);
  }

  bool SchutzTarget::adjacent_zero(VertexName const& u, VertexName const& v) const {
    std::uint64_t su = _limit->stage_of(u);
    std::uint64_t sv = _limit->stage_of(v);
    if (su == 0 && sv == 0) {
      return _pair.e_zero.adjacent(u, v);
    }
    return u != v && su != sv;
  }

  GreedyResult greedy_injective_hom(Structure const&    source,
                                    SchutzTarget const& target,
                                    VertexMap const&    pins) {
    if (source.kind() != Kind::graph) {
      throw PreconditionError("greedy_injective_hom expects a graph source");
    }
    LazyLimit const&        L = *target.limit();
    std::vector<VertexName> order;
    std::set<VertexName>    used;
    VertexMap               map;
    for (auto const& [v, image] : pins.assignment()) {
      if (!source.contains(v) || !L.contains(image)) {
        throw PreconditionError("pin " + v.to_string() + " -> " + image.to_string()
                                + " leaves the source or the target");
      }
      if (!used.insert(image).second) {
        throw PreconditionError("pins must be injective");
      }
      for (auto const& u : order) {
        if (source.adjacent(u, v) != L.adjacent(map(u), image)) {
          throw PreconditionError("pins " + u.to_string() + " and " + v.to_string()
                                  + " do not respect adjacency");
        }
      }
      map.set(v, image);
      order.push_back(v);
    }
    for (auto const& v : source.vertices()) {
      if (map.defines(v)) {
        continue;
      }
      std::vector<VertexName> U, V;
      for (auto const& u : order) {
        (source.adjacent(u, v) ? U : V).push_back(map(u));
      }
      VertexName image = find_ec_witness(L, U, V);
      map.set(v, image);
      order.push_back(v);
    }
    GreedyResult result;
    result.hom.domain = source;
    result.hom.map    = map;
    result.hom.target = target.limit();
    for (std::size_t a = 0; a < source.size() && !result.discrepancy; ++a) {
      for (std::size_t b = a + 1; b < source.size(); ++b) {
        VertexName const& u = source.vertex(a);
        VertexName const& v = source.vertex(b);
        if (!source.adjacent(a, b) && target.adjacent_zero(map(u), map(v))) {
          result.discrepancy = NamePair(u, v);
          break;
        }
      }
    }
    return result;
  }

}  // namespace forge
