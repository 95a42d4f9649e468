#include "forge/universal.hpp"

#include <algorithm>      // for sort, max, min, lower_bound, upper_bound
#include <array>          // for array
#include <limits>         // for numeric_limits
#include <sstream>        // for ostringstream
#include <unordered_map>  // for unordered_map

#include "forge/constructions.hpp"  // for path_vertex, pendant_vertex, blowup_vertex
#include "forge/errors.hpp"         // for PreconditionError, CapExceeded, CoverageError

namespace forge {

  namespace {
    using u128 = unsigned __int128;
    using i128 = __int128;

    constexpr u128 kStageLimit = u128(1) << 62;
    constexpr u128 kBinomLimit = u128(1) << 120;

    // C(n, r), 0 when r < 0 or r > n.  Throws CapExceeded if the value
    // leaves the range where the ranking arithmetic is exact.
    u128 binom(i128 n, i128 r) {
      if (r < 0 || n < 0 || r > n) {
        return 0;
      }
      if (r > n - r) {
        r = n - r;
      }
      u128 result = 1;
      for (i128 i = 0; i < r; ++i) {
        u128 factor = static_cast<u128>(n - i);
        if (result > kBinomLimit / factor) {
          throw CapExceeded("binomial coefficient too large; lower the subset cap");
        }
        result = result * factor / static_cast<u128>(i + 1);
      }
      return result;
    }

    u128 power(u128 base, std::uint64_t e) {
      u128 result = 1;
      for (std::uint64_t i = 0; i < e; ++i) {
        if (result > kBinomLimit / base) {
          throw CapExceeded("label count too large; lower the subset cap");
        }
        result *= base;
      }
      return result;
    }

    u128 checked_mul(u128 a, u128 b) {
      if (a != 0 && b > kBinomLimit / a) {
        throw CapExceeded("item count too large; lower the subset cap");
      }
      return a * b;
    }

    // k-subsets of {0, .., m-1} in lexicographic order.  With fresh set,
    // only subsets with a member >= old are counted.
    struct Space {
      i128 m     = 0;
      bool fresh = false;
      i128 old   = 0;

      u128 count(std::uint64_t k) const {
        u128 all = binom(m, k);
        return fresh ? all - binom(old, k) : all;
      }

      // Number of admissible completions of a prefix by some y in [a, b]
      // followed by r further members above y.  prefix_old says whether the
      // prefix so far lies below old.
      u128 range(i128 a, i128 b, i128 r, bool prefix_old) const {
        if (a > b) {
          return 0;
        }
        // sum_{y=a}^{b} C(m-1-y, r) = C(m-a, r+1) - C(m-1-b, r+1)
        u128 total = binom(m - a, r + 1) - binom(m - 1 - b, r + 1);
        if (fresh && prefix_old) {
          i128 b2 = std::min(b, old - 1);
          if (a <= b2) {
            total -= binom(old - a, r + 1) - binom(old - 1 - b2, r + 1);
          }
        }
        return total;
      }

      u128 rank(std::vector<std::uint64_t> const& x) const {
        u128 r          = 0;
        i128 prev       = -1;
        bool prefix_old = true;
        i128 k          = static_cast<i128>(x.size());
        for (i128 t = 0; t < k; ++t) {
          i128 xt = x[static_cast<std::size_t>(t)];
          r += range(prev + 1, xt - 1, k - 1 - t, prefix_old);
          prefix_old = prefix_old && xt < old;
          prev       = xt;
        }
        return r;
      }

      std::vector<std::uint64_t> unrank(u128 r, std::uint64_t k) const {
        std::vector<std::uint64_t> x;
        x.reserve(k);
        i128 prev       = -1;
        bool prefix_old = true;
        for (std::uint64_t t = 0; t < k; ++t) {
          i128 a  = prev + 1;
          i128 rr = static_cast<i128>(k - 1 - t);
          // least y with range(a, y) > r
          i128 lo = a, hi = m - 1;
          while (lo < hi) {
            i128 mid = lo + (hi - lo) / 2;
            if (range(a, mid, rr, prefix_old) > r) {
              hi = mid;
            } else {
              lo = mid + 1;
            }
          }
          r -= range(a, lo - 1, rr, prefix_old);
          x.push_back(static_cast<std::uint64_t>(lo));
          prefix_old = prefix_old && lo < old;
          prev       = lo;
        }
        return x;
      }
    };

    std::string describe(std::vector<VertexName> const& vs) {
      std::string out = "{";
      for (std::size_t i = 0; i < vs.size(); ++i) {
        out += (i == 0 ? "" : ",") + vs[i].to_string();
      }
      return out + "}";
    }

    int popcount(std::uint8_t x) {
      int c = 0;
      for (; x != 0; x &= static_cast<std::uint8_t>(x - 1)) {
        ++c;
      }
      return c;
    }
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // UltimatelyPeriodicSet
  ////////////////////////////////////////////////////////////////////////

  UltimatelyPeriodicSet::UltimatelyPeriodicSet(std::set<std::uint64_t> prefix,
                                               std::uint64_t           start,
                                               std::uint64_t           period,
                                               std::set<std::uint64_t> residues)
      : _prefix(std::move(prefix)),
        _start(start),
        _period(period),
        _residues(std::move(residues)) {
    for (auto n : _prefix) {
      if (n < 2) {
        throw PreconditionError("index sets only contain naturals >= 2");
      }
      if (n >= _start) {
        throw PreconditionError("prefix members must lie below the start of the period");
      }
    }
    if (_period == 0) {
      if (!_residues.empty()) {
        throw PreconditionError("residues need a positive period");
      }
    } else {
      if (_start < 2 && !_residues.empty()) {
        throw PreconditionError("the periodic part must start at 2 or later");
      }
      for (auto r : _residues) {
        if (r >= _period) {
          throw PreconditionError("residues must be smaller than the period");
        }
      }
    }
  }

  UltimatelyPeriodicSet UltimatelyPeriodicSet::finite(std::set<std::uint64_t> members) {
    std::uint64_t start = members.empty() ? 2 : *members.rbegin() + 1;
    return UltimatelyPeriodicSet(std::move(members), start, 0, {});
  }

  UltimatelyPeriodicSet UltimatelyPeriodicSet::parse(std::string const& text) {
    auto bar = text.find('|');
    auto pre = IndexSet::parse(text.substr(0, bar)).values();
    if (bar == std::string::npos) {
      return finite(pre);
    }
    std::string rest = text.substr(bar + 1);
    auto        c1   = rest.find(':');
    auto        c2   = c1 == std::string::npos ? c1 : rest.find(':', c1 + 1);
    if (c2 == std::string::npos) {
      throw ParseError("periodic set \"" + text + "\" must look like F|start:period:residues");
    }
    try {
      std::uint64_t           start  = std::stoull(rest.substr(0, c1));
      std::uint64_t           period = std::stoull(rest.substr(c1 + 1, c2 - c1 - 1));
      std::set<std::uint64_t> residues;
      std::string             list = rest.substr(c2 + 1);
      std::size_t             pos  = 0;
      while (pos < list.size()) {
        auto comma = std::min(list.find(',', pos), list.size());
        residues.insert(std::stoull(list.substr(pos, comma - pos)));
        pos = comma + 1;
      }
      return UltimatelyPeriodicSet(pre, start, period, residues);
    } catch (std::logic_error const&) {
      throw ParseError("bad number in periodic set \"" + text + "\"");
    }
  }

  bool UltimatelyPeriodicSet::contains(std::uint64_t n) const {
    if (n < _start) {
      return _prefix.count(n) != 0;
    }
    return _period != 0 && _residues.count((n - _start) % _period) != 0;
  }

  std::uint64_t UltimatelyPeriodicSet::count_below(std::uint64_t n) const {
    std::uint64_t c
        = std::distance(_prefix.begin(), _prefix.lower_bound(std::min(n, _start)));
    if (n > _start && _period != 0) {
      std::uint64_t span = n - _start;
      c += (span / _period) * _residues.size();
      c += std::distance(_residues.begin(), _residues.lower_bound(span % _period));
    }
    return c;
  }

  std::string UltimatelyPeriodicSet::to_string() const {
    std::string out;
    for (auto n : _prefix) {
      out += (out.empty() ? "" : ",") + std::to_string(n);
    }
    if (_period != 0) {
      out += "|" + std::to_string(_start) + ":" + std::to_string(_period) + ":";
      bool first = true;
      for (auto r : _residues) {
        out += (first ? "" : ",") + std::to_string(r);
        first = false;
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // FiniteOracle
  ////////////////////////////////////////////////////////////////////////

  FiniteOracle::FiniteOracle(Structure s) : _s(std::move(s)) {}

  VertexName FiniteOracle::vertex(std::uint64_t i) const {
    if (i >= _s.size()) {
      throw PreconditionError("oracle has only " + std::to_string(_s.size()) + " vertices");
    }
    return _s.vertex(i);
  }

  std::optional<std::uint64_t> FiniteOracle::position(VertexName const& v) const {
    auto i = _s.find(v);
    return i ? std::optional<std::uint64_t>(*i) : std::nullopt;
  }

  bool FiniteOracle::adjacent(VertexName const& u, VertexName const& v) const {
    return _s.adjacent(u, v);
  }

  int FiniteOracle::part(VertexName const& v) const {
    return _s.part(v);
  }

  std::vector<VertexName> FiniteOracle::common(std::vector<VertexName> const& A,
                                               int part) const {
    std::vector<std::size_t> idx;
    for (auto const& a : A) {
      idx.push_back(_s.index_of(a));
    }
    std::vector<VertexName> out;
    for (std::size_t x = 0; x < _s.size(); ++x) {
      if (_s.kind() == Kind::bipartite && _s.part(x) != part) {
        continue;
      }
      bool ok = true;
      for (auto a : idx) {
        ok = ok && _s.adjacent(x, a) && _s.adjacent(a, x);
      }
      if (ok) {
        out.push_back(_s.vertex(x));
      }
    }
    return out;
  }

  std::optional<std::uint64_t> FiniteOracle::multiplicity(std::vector<VertexName> const& A,
                                                          int part) const {
    return common(A, part).size();
  }

  VertexName FiniteOracle::witness(std::vector<VertexName> const& A,
                                   std::uint64_t                  j,
                                   int                            part) const {
    auto c = common(A, part);
    if (j >= c.size()) {
      throw CoverageError("the finite oracle has " + std::to_string(c.size())
                          + " common neighbours of " + describe(A) + ", witness "
                          + std::to_string(j) + " requested");
    }
    return c[j];
  }

  ////////////////////////////////////////////////////////////////////////
  // DeltaOracle
  ////////////////////////////////////////////////////////////////////////

  DeltaOracle::DeltaOracle(Structure g, UltimatelyPeriodicSet S)
      : _g(std::move(g)), _S(std::move(S)) {
    if (_g.kind() != Kind::graph) {
      throw PreconditionError("lazy_delta expects a graph");
    }
    for (auto const& v : _g.vertices()) {
      if (v.is_gadget() && v.parents().empty() && (v.label() == "l" || v.label() == "v")) {
        _wrap = true;
      }
    }
  }

  VertexName DeltaOracle::path(std::uint64_t n) const {
    return _wrap ? VertexName::gadget("L", 0, {path_vertex(n)}) : path_vertex(n);
  }

  VertexName DeltaOracle::pendant(std::uint64_t n) const {
    return _wrap ? VertexName::gadget("L", 0, {pendant_vertex(n)}) : pendant_vertex(n);
  }

  std::optional<DeltaOracle::LVertex> DeltaOracle::decode(VertexName const& v) const {
    VertexName const* inner = &v;
    if (_wrap) {
      if (!v.is_gadget() || v.label() != "L" || v.index() != 0 || v.parents().size() != 1) {
        return std::nullopt;
      }
      inner = &v.parents()[0];
    }
    if (!inner->is_gadget() || !inner->parents().empty()) {
      return std::nullopt;
    }
    if (inner->label() == "l") {
      return LVertex{false, inner->index()};
    }
    if (inner->label() == "v" && _S.contains(inner->index())) {
      return LVertex{true, inner->index()};
    }
    return std::nullopt;
  }

  VertexName DeltaOracle::vertex(std::uint64_t i) const {
    if (i < _g.size()) {
      return _g.vertex(i);
    }
    std::uint64_t t = i - _g.size();
    // largest n with n + count_below(n) <= t
    std::uint64_t lo = 0, hi = t;
    while (lo < hi) {
      std::uint64_t mid = lo + (hi - lo + 1) / 2;
      if (mid + _S.count_below(mid) <= t) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    return lo + _S.count_below(lo) == t ? path(lo) : pendant(lo);
  }

  std::optional<std::uint64_t> DeltaOracle::position(VertexName const& v) const {
    if (auto i = _g.find(v)) {
      return *i;
    }
    auto d = decode(v);
    if (!d) {
      return std::nullopt;
    }
    return _g.size() + d->n + _S.count_below(d->n) + (d->pendant ? 1 : 0);
  }

  bool DeltaOracle::adjacent(VertexName const& u, VertexName const& v) const {
    auto gu = _g.find(u), gv = _g.find(v);
    auto du = gu ? std::nullopt : decode(u);
    auto dv = gv ? std::nullopt : decode(v);
    if ((!gu && !du) || (!gv && !dv)) {
      throw PreconditionError("not a vertex of the oracle: "
                              + ((!gu && !du) ? u : v).to_string());
    }
    if (u == v) {
      return false;
    }
    if (gu && gv) {
      return !_g.adjacent(*gu, *gv);
    }
    if (gu || gv) {
      return true;
    }
    // both in L_S: adjacent in the complement iff not an edge of L_S
    LVertex const a = du.value();
    LVertex const b = dv.value();
    if (!a.pendant && !b.pendant) {
      return a.n + 1 != b.n && b.n + 1 != a.n;
    }
    if (a.pendant != b.pendant) {
      return a.n != b.n;
    }
    return true;
  }

  VertexName DeltaOracle::witness(std::vector<VertexName> const& A,
                                  std::uint64_t                  j,
                                  int) const {
    std::uint64_t base  = 0;
    bool          touch = false;
    for (auto const& a : A) {
      if (_g.contains(a)) {
        continue;
      }
      auto d = decode(a);
      if (!d) {
        throw PreconditionError("not a vertex of the oracle: " + a.to_string());
      }
      base  = touch ? std::max(base, d->n + 2) : d->n + 2;
      touch = true;
    }
    return path(base + j);
  }

  std::shared_ptr<DeltaOracle const> lazy_delta(Structure const&             g,
                                                UltimatelyPeriodicSet const& S) {
    return std::make_shared<DeltaOracle const>(g, S);
  }

  ////////////////////////////////////////////////////////////////////////
  // SharpOracle
  ////////////////////////////////////////////////////////////////////////

  SharpOracle::SharpOracle(std::shared_ptr<ACOracle const> inner, std::uint64_t r)
      : _inner(std::move(inner)), _r(r) {
    if (_r == 0) {
      throw PreconditionError("blowup needs r >= 1");
    }
    if (_inner->kind() == Kind::digraph) {
      throw PreconditionError("blowup expects a graph or bipartite graph");
    }
  }

  std::optional<std::uint64_t> SharpOracle::size() const {
    auto n = _inner->size();
    return n ? std::optional<std::uint64_t>(*n * _r) : std::nullopt;
  }

  VertexName SharpOracle::vertex(std::uint64_t i) const {
    return blowup_vertex(_inner->vertex(i / _r), i % _r);
  }

  std::optional<std::uint64_t> SharpOracle::position(VertexName const& v) const {
    if (!v.is_gadget() || v.label() != "b" || v.parents().size() != 1 || v.index() >= _r) {
      return std::nullopt;
    }
    auto p = _inner->position(v.parents()[0]);
    return p ? std::optional<std::uint64_t>(*p * _r + v.index()) : std::nullopt;
  }

  bool SharpOracle::adjacent(VertexName const& u, VertexName const& v) const {
    if (!contains(u) || !contains(v)) {
      throw PreconditionError("not a vertex of the blowup oracle");
    }
    auto const& bu = u.parents()[0];
    auto const& bv = v.parents()[0];
    return bu != bv && _inner->adjacent(bu, bv);
  }

  int SharpOracle::part(VertexName const& v) const {
    if (!contains(v)) {
      throw PreconditionError("not a vertex of the blowup oracle: " + v.to_string());
    }
    return _inner->part(v.parents()[0]);
  }

  std::vector<VertexName> SharpOracle::bases(std::vector<VertexName> const& A) const {
    std::vector<VertexName> out;
    for (auto const& a : A) {
      if (!contains(a)) {
        throw PreconditionError("not a vertex of the blowup oracle: " + a.to_string());
      }
      out.push_back(a.parents()[0]);
    }
    normalise(out);
    return out;
  }

  std::optional<std::uint64_t> SharpOracle::multiplicity(std::vector<VertexName> const& A,
                                                         int part) const {
    auto m = _inner->multiplicity(bases(A), part);
    return m ? std::optional<std::uint64_t>(*m * _r) : std::nullopt;
  }

  VertexName SharpOracle::witness(std::vector<VertexName> const& A,
                                  std::uint64_t                  j,
                                  int                            part) const {
    return blowup_vertex(_inner->witness(bases(A), j / _r, part), j % _r);
  }

  ////////////////////////////////////////////////////////////////////////
  // StagePlan
  ////////////////////////////////////////////////////////////////////////

  std::optional<std::uint64_t> StagePlan::cap(std::uint64_t stage) const {
    auto it = stage_caps.find(stage);
    return it == stage_caps.end() ? subset_cap : it->second;
  }

  ////////////////////////////////////////////////////////////////////////
  // LazyLimit
  ////////////////////////////////////////////////////////////////////////

  struct LazyLimit::Impl {
    struct Block {
      int                        lane  = 0;  // part of the members
      int                        wpart = 0;  // part of the witnesses
      std::uint64_t              first = 0;
      std::uint64_t              count = 0;
      std::uint64_t              kmax  = 0;
      std::vector<std::uint64_t> size_offset;  // start of each size, plus end
      Space                      space;
    };
    struct Stage {
      std::array<std::uint64_t, 2> before{0, 0};  // lane sizes before the stage
      std::vector<Block>           blocks;
      std::uint64_t                total        = 0;
      std::uint64_t                first_serial = 0;
    };

    std::uint64_t                                                   L = 1;
    std::array<std::vector<VertexName>, 2>                          lane_seeds;
    std::array<std::unordered_map<VertexName, std::uint64_t, VertexNameHash>, 2> lane_pos;
    std::vector<VertexName>                                         stage0;
    std::vector<Stage>                                              stages;

    Block const* block_of(std::uint64_t s, std::uint64_t i) const {
      for (auto const& b : stages[s - 1].blocks) {
        if (i >= b.first && i < b.first + b.count) {
          return &b;
        }
      }
      return nullptr;
    }

    Block const* block_for_part(std::uint64_t s, int part) const {
      for (auto const& b : stages[s - 1].blocks) {
        if (b.wpart == part) {
          return &b;
        }
      }
      return nullptr;
    }

    VertexName vertex_at(int lane, std::uint64_t pos, std::uint64_t offset) const {
      auto const& seeds = lane_seeds[lane];
      if (pos < seeds.size()) {
        return seeds[pos];
      }
      // last stage whose lane start is <= pos
      auto it = std::upper_bound(stages.begin(), stages.end(), pos,
                                 [lane](std::uint64_t p, Stage const& st) {
                                   return p < st.before[lane];
                                 });
      std::uint64_t s = static_cast<std::uint64_t>(it - stages.begin());
      Block const*  b = block_for_part(s, lane);
      return VertexName::witness(offset + s, b->first + (pos - stages[s - 1].before[lane]));
    }
  };

  LazyLimit::~LazyLimit() = default;

  std::shared_ptr<LazyLimit const> LazyLimit::over(Structure seed, StagePlan plan) {
    std::shared_ptr<LazyLimit> L(new LazyLimit());
    L->_kind = seed.kind();
    L->_plan = std::move(plan);
    L->_seed = std::move(seed);
    L->init();
    return L;
  }

  std::shared_ptr<LazyLimit const> LazyLimit::over(std::shared_ptr<ACOracle const> oracle,
                                                   std::uint64_t                   window,
                                                   StagePlan                       plan) {
    if (auto n = oracle->size()) {
      window = std::min(window, *n);
    }
    std::vector<VertexName>   vertices;
    std::map<VertexName, int> parts;
    for (std::uint64_t i = 0; i < window; ++i) {
      vertices.push_back(oracle->vertex(i));
      parts[vertices.back()] = oracle->part(vertices.back());
    }
    std::vector<NamePair> edges;
    for (auto const& u : vertices) {
      for (auto const& v : vertices) {
        if (u != v && oracle->adjacent(u, v)
            && (oracle->kind() == Kind::digraph || u < v)) {
          edges.emplace_back(u, v);
        }
      }
    }
    Structure seed;
    switch (oracle->kind()) {
      case Kind::graph:
        seed = Structure::graph(vertices, edges);
        break;
      case Kind::digraph:
        seed = Structure::digraph(vertices, edges);
        break;
      case Kind::bipartite:
        seed = Structure::bipartite(vertices, parts, edges);
        break;
    }
    std::shared_ptr<LazyLimit> L(new LazyLimit());
    L->_kind   = oracle->kind();
    L->_plan   = std::move(plan);
    L->_seed   = std::move(seed);
    L->_oracle = std::move(oracle);
    L->init();
    return L;
  }

  void LazyLimit::init() {
    _impl    = std::make_unique<Impl>();
    auto& im = *_impl;
    im.L     = _kind == Kind::digraph ? 3 : 1;
    _offset  = 0;
    for (auto const& v : _seed.vertices()) {
      _offset = std::max(_offset, v.stage_rank());
    }
    if (_oracle && _oracle->size()) {
      for (std::uint64_t i = 0; i < *_oracle->size(); ++i) {
        _offset = std::max(_offset, _oracle->vertex(i).stage_rank());
      }
    }
    im.stage0 = _seed.vertices();
    for (std::size_t i = 0; i < _seed.size(); ++i) {
      int lane = _kind == Kind::bipartite ? _seed.part(i) : 0;
      im.lane_pos[lane].emplace(_seed.vertex(i), im.lane_seeds[lane].size());
      im.lane_seeds[lane].push_back(_seed.vertex(i));
    }

    std::array<std::uint64_t, 2> size{im.lane_seeds[0].size(), im.lane_seeds[1].size()};
    u128                         serial = 0;
    for (std::uint64_t s = 1; s <= _plan.stages; ++s) {
      Impl::Stage st;
      st.before       = size;
      st.first_serial = static_cast<std::uint64_t>(serial);
      bool fresh      = _plan.mode == Reenumeration::fresh_only && s >= 2;
      auto cap        = _plan.cap(s);

      std::vector<std::pair<int, int>> lanes;  // (member lane, witness part)
      if (_kind == Kind::bipartite) {
        lanes = {{0, 1}, {1, 0}};
      } else {
        lanes = {{0, 0}};
      }
      u128 total = 0;
      for (auto [lane, wpart] : lanes) {
        Impl::Block b;
        b.lane        = lane;
        b.wpart       = wpart;
        b.first       = static_cast<std::uint64_t>(total);
        std::uint64_t m = st.before[lane];
        b.space.m     = m;
        b.space.fresh = fresh;
        b.space.old   = fresh ? _impl->stages[s - 2].before[lane] : 0;
        b.kmax        = cap ? std::min<std::uint64_t>(*cap, m) : m;
        u128 count    = 0;
        for (std::uint64_t k = 0; k <= b.kmax; ++k) {
          b.size_offset.push_back(static_cast<std::uint64_t>(count));
          count += checked_mul(b.space.count(k), power(im.L, k));
          if (total + count > kStageLimit) {
            throw CapExceeded("stage " + std::to_string(s) + " schedules more than 2^62 "
                              "items; use a subset cap or fewer stages");
          }
        }
        b.size_offset.push_back(static_cast<std::uint64_t>(count));
        b.count = static_cast<std::uint64_t>(count);
        total += count;
        st.blocks.push_back(std::move(b));
      }
      st.total = static_cast<std::uint64_t>(total);
      for (auto const& b : st.blocks) {
        size[b.wpart] += b.count;
      }
      serial += total;
      if (serial > kStageLimit) {
        throw CapExceeded("the plan has more than 2^62 witnesses; use a subset cap");
      }
      im.stages.push_back(std::move(st));
    }
  }

  bool LazyLimit::contains(VertexName const& v) const {
    if (v.is_witness() && v.stage_rank() > _offset) {
      std::uint64_t s = v.stage_rank() - _offset;
      return s <= _plan.stages && v.index() < _impl->stages[s - 1].total;
    }
    return _oracle ? _oracle->contains(v) : _seed.contains(v);
  }

  std::uint64_t LazyLimit::stage_of(VertexName const& v) const {
    if (!contains(v)) {
      throw PreconditionError("not a vertex of the limit: " + v.to_string());
    }
    return v.is_witness() && v.stage_rank() > _offset ? v.stage_rank() - _offset : 0;
  }

  std::uint64_t LazyLimit::stage_count(std::uint64_t s) const {
    if (s == 0 || s > _plan.stages) {
      throw PreconditionError("stage " + std::to_string(s) + " is outside the plan");
    }
    return _impl->stages[s - 1].total;
  }

  std::uint64_t LazyLimit::size_up_to(std::uint64_t n) const {
    n                 = std::min(n, _plan.stages);
    std::uint64_t out = _seed.size();
    for (std::uint64_t s = 1; s <= n; ++s) {
      out += _impl->stages[s - 1].total;
    }
    return out;
  }

  std::uint64_t LazyLimit::serial(VertexName const& w) const {
    std::uint64_t s = stage_of(w);
    if (s == 0) {
      throw PreconditionError(w.to_string() + " is not a witness of the limit");
    }
    return _impl->stages[s - 1].first_serial + w.index();
  }

  std::vector<VertexName> LazyLimit::vertices_up_to(std::uint64_t n,
                                                    std::uint64_t limit) const {
    if (n > _plan.stages) {
      throw CoverageError("stage " + std::to_string(n) + " is beyond the plan's "
                          + std::to_string(_plan.stages) + " stages");
    }
    std::uint64_t size = size_up_to(n);
    if (size > limit) {
      throw CapExceeded("stages 0.." + std::to_string(n) + " hold " + std::to_string(size)
                        + " vertices, more than the limit " + std::to_string(limit));
    }
    std::vector<VertexName> out = _impl->stage0;
    out.reserve(size);
    for (std::uint64_t s = 1; s <= n; ++s) {
      for (std::uint64_t i = 0; i < _impl->stages[s - 1].total; ++i) {
        out.push_back(VertexName::witness(_offset + s, i));
      }
    }
    return out;
  }

  Structure LazyLimit::stage_structure(std::uint64_t n, std::uint64_t limit) const {
    auto                      vertices = vertices_up_to(n, limit);
    std::vector<NamePair>     edges    = _seed.edges();
    std::map<VertexName, int> parts;
    for (auto const& v : vertices) {
      if (v.is_witness() && v.stage_rank() > _offset) {
        Item it = item(v);
        parts[v] = it.part;
        for (std::size_t t = 0; t < it.members.size(); ++t) {
          auto const& a = it.members[t];
          if (_kind != Kind::digraph) {
            edges.emplace_back(std::min(a, v), std::max(a, v));
            continue;
          }
          if (it.labels[t] != arc_in) {
            edges.emplace_back(v, a);
          }
          if (it.labels[t] != arc_out) {
            edges.emplace_back(a, v);
          }
        }
      } else {
        parts[v] = _seed.part(v);
      }
    }
    switch (_kind) {
      case Kind::graph:
        return Structure::graph(std::move(vertices), edges);
      case Kind::digraph:
        return Structure::digraph(std::move(vertices), edges);
      case Kind::bipartite:
        return Structure::bipartite(std::move(vertices), parts, edges);
    }
    return {};
  }

  Item LazyLimit::item(VertexName const& w) const {
    std::uint64_t s = stage_of(w);
    if (s == 0) {
      throw PreconditionError(w.to_string() + " is not a witness of the limit");
    }
    auto const&   im = *_impl;
    auto const*   b  = im.block_of(s, w.index());
    std::uint64_t r  = w.index() - b->first;
    std::uint64_t k  = static_cast<std::uint64_t>(
        std::upper_bound(b->size_offset.begin(), b->size_offset.end(), r)
        - b->size_offset.begin() - 1);
    u128 within = r - b->size_offset[k];
    u128 Lk     = power(im.L, k);
    auto pos    = b->space.unrank(within / Lk, k);
    u128 code   = within % Lk;
    Item out;
    out.part = b->wpart;
    out.labels.assign(k, 0);
    for (std::uint64_t t = k; t-- > 0;) {
      out.labels[t] = static_cast<std::uint8_t>(code % im.L);
      code /= im.L;
    }
    for (auto p : pos) {
      out.members.push_back(im.vertex_at(b->lane, p, _offset));
    }
    return out;
  }

  namespace {
    // Position of v in lane and pool of stage s (the vertices before stage
    // s); empty if v is not in that pool.
    struct PoolPosition {
      int           lane;
      std::uint64_t pos;
    };
  }  // namespace

  // NOLINTNEXTLINE(readability-function-size)
  std::optional<VertexName> LazyLimit::nth_item(std::uint64_t                  s,
                                                int                            part,
                                                std::vector<Constraint> const& required,
                                                std::vector<VertexName> const& forbidden,
                                                std::uint64_t                  j) const {
    if (s == 0 || s > _plan.stages) {
      return std::nullopt;
    }
    auto const& im = *_impl;
    auto const* b  = im.block_for_part(s, part);
    if (b == nullptr) {
      return std::nullopt;
    }
    std::uint64_t const m = im.stages[s - 1].before[b->lane];

    auto pool_position = [&](VertexName const& v) -> std::optional<std::uint64_t> {
      if (!contains(v)) {
        return std::nullopt;
      }
      std::uint64_t sv = stage_of(v);
      if (sv == 0) {
        auto it = im.lane_pos[b->lane].find(v);
        if (it == im.lane_pos[b->lane].end()) {
          return std::nullopt;
        }
        return it->second;
      }
      if (sv >= s) {
        return std::nullopt;
      }
      auto const* vb = im.block_of(sv, v.index());
      if (vb->wpart != b->lane) {
        return std::nullopt;
      }
      return im.stages[sv - 1].before[b->lane] + (v.index() - vb->first);
    };

    std::uint8_t const        valid = static_cast<std::uint8_t>((1U << im.L) - 1);
    std::map<std::uint64_t, std::uint8_t> req;
    for (auto const& c : required) {
      auto p = pool_position(c.v);
      if (!p) {
        return std::nullopt;
      }
      auto [it, fresh] = req.emplace(*p, c.mask & valid);
      if (!fresh) {
        it->second &= c.mask;
      }
      if (it->second == 0) {
        return std::nullopt;
      }
    }
    std::vector<std::uint64_t> holes;
    for (auto const& [p, mask] : req) {
      holes.push_back(p);
    }
    for (auto const& v : forbidden) {
      if (auto p = pool_position(v)) {
        if (req.count(*p) != 0) {
          return std::nullopt;
        }
        holes.push_back(*p);
      }
    }
    std::sort(holes.begin(), holes.end());
    holes.erase(std::unique(holes.begin(), holes.end()), holes.end());
    if (req.size() > b->kmax) {
      return std::nullopt;
    }

    Space ext;
    ext.m              = static_cast<i128>(m - holes.size());
    bool req_has_fresh = false;
    for (auto const& [p, mask] : req) {
      req_has_fresh = req_has_fresh || static_cast<i128>(p) >= b->space.old;
    }
    ext.fresh = b->space.fresh && !req_has_fresh;
    ext.old   = b->space.old
              - static_cast<i128>(std::lower_bound(holes.begin(), holes.end(),
                                                   static_cast<std::uint64_t>(b->space.old))
                                  - holes.begin());

    u128 box = 1;
    for (auto const& [p, mask] : req) {
      box *= static_cast<u128>(popcount(mask));
    }
    u128 jj = j;
    for (std::uint64_t k = req.size(); k <= b->kmax; ++k) {
      std::uint64_t e   = k - req.size();
      u128          per = checked_mul(box, power(im.L, e));
      u128          tot = checked_mul(ext.count(e), per);
      if (jj >= tot) {
        jj -= tot;
        continue;
      }
      auto ex = ext.unrank(jj / per, e);
      u128 code = jj % per;
      // extras index -> pool position, skipping the holes
      std::vector<std::uint64_t> merged;
      for (auto x : ex) {
        std::uint64_t pos = x;
        for (auto h : holes) {
          if (h <= pos) {
            ++pos;
          } else {
            break;
          }
        }
        merged.push_back(pos);
      }
      for (auto const& [p, mask] : req) {
        merged.push_back(p);
      }
      std::sort(merged.begin(), merged.end());
      // decode the label box, most significant digit first
      std::vector<std::uint8_t> labels(merged.size(), 0);
      for (std::size_t t = merged.size(); t-- > 0;) {
        auto it = req.find(merged[t]);
        if (it == req.end()) {
          labels[t] = static_cast<std::uint8_t>(code % im.L);
          code /= im.L;
        } else {
          std::vector<std::uint8_t> allowed;
          for (std::uint8_t l = 0; l < im.L; ++l) {
            if (it->second & label_bit(l)) {
              allowed.push_back(l);
            }
          }
          labels[t] = allowed[static_cast<std::size_t>(code % allowed.size())];
          code /= allowed.size();
        }
      }
      u128 full = 0;
      for (auto l : labels) {
        full = full * im.L + l;
      }
      u128 index = b->first + b->size_offset[k]
                   + b->space.rank(merged) * power(im.L, k) + full;
      return VertexName::witness(_offset + s, static_cast<std::uint64_t>(index));
    }
    return std::nullopt;
  }

  std::uint64_t LazyLimit::count_items(std::uint64_t                  s,
                                       int                            part,
                                       std::vector<Constraint> const& required,
                                       std::vector<VertexName> const& forbidden) const {
    // Binary search on nth_item keeps a single code path for the ranking.
    if (!nth_item(s, part, required, forbidden, 0)) {
      return 0;
    }
    std::uint64_t lo = 0, hi = stage_count(s) - 1;  // lo is always valid
    while (lo < hi) {
      std::uint64_t mid = lo + (hi - lo + 1) / 2;
      if (nth_item(s, part, required, forbidden, mid)) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    return lo + 1;
  }

  std::optional<VertexName> LazyLimit::witness_for(std::uint64_t s, Item const& item) const {
    std::vector<Constraint> req;
    for (std::size_t t = 0; t < item.members.size(); ++t) {
      std::uint8_t l = t < item.labels.size() ? item.labels[t] : 0;
      req.push_back({item.members[t], label_bit(l)});
    }
    std::vector<VertexName> sorted = item.members;
    normalise(sorted);
    if (sorted.size() != item.members.size()) {
      return std::nullopt;
    }
    // the item itself is the first item containing it with no extras
    auto w = nth_item(s, item.part, req, {}, 0);
    if (!w || this->item(*w).members.size() != item.members.size()) {
      return std::nullopt;
    }
    return w;
  }

  int LazyLimit::part(VertexName const& v) const {
    std::uint64_t s = stage_of(v);
    if (s == 0) {
      return _oracle ? _oracle->part(v) : _seed.part(v);
    }
    return _impl->block_of(s, v.index())->wpart;
  }

  bool LazyLimit::adjacent(VertexName const& u, VertexName const& v) const {
    std::uint64_t su = stage_of(u);
    std::uint64_t sv = stage_of(v);
    if (su == 0 && sv == 0) {
      return _oracle ? _oracle->adjacent(u, v) : _seed.adjacent(u, v);
    }
    if (su == sv) {
      return false;
    }
    VertexName const& w     = su > sv ? u : v;
    VertexName const& other = su > sv ? v : u;
    Item              it    = item(w);
    auto pos = std::lower_bound(it.members.begin(), it.members.end(), other);
    if (pos == it.members.end() || *pos != other) {
      return false;
    }
    std::uint8_t l = it.labels[static_cast<std::size_t>(pos - it.members.begin())];
    if (_kind != Kind::digraph) {
      return true;
    }
    // arc u -> v: out from the witness, or in towards it
    return su > sv ? l != arc_in : l != arc_out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Eager stages
  ////////////////////////////////////////////////////////////////////////

  StageResult witness_stage(Structure const&               current,
                            StageSchedule const&           schedule,
                            std::vector<VertexName> const& fresh) {
    std::uint64_t rank = 0;
    for (auto const& v : current.vertices()) {
      rank = std::max(rank, v.stage_rank());
    }
    std::uint64_t stage = schedule.name_stage.value_or(rank + 1);
    Kind const    kind  = current.kind();
    std::uint64_t L     = kind == Kind::digraph ? 3 : 1;

    std::set<VertexName> fresh_set(fresh.begin(), fresh.end());
    std::vector<VertexName>   vertices = current.vertices();
    std::vector<NamePair>     edges    = current.edges();
    std::map<VertexName, int> parts;
    for (std::size_t i = 0; i < current.size(); ++i) {
      parts[current.vertex(i)] = current.part(i);
    }

    StageResult   result;
    std::uint64_t next = 0;
    int const     lanes = kind == Kind::bipartite ? 2 : 1;
    for (int lane = 0; lane < lanes && !result.truncated; ++lane) {
      std::vector<VertexName> pool;
      for (std::size_t i = 0; i < current.size(); ++i) {
        if (kind != Kind::bipartite || current.part(i) == lane) {
          pool.push_back(current.vertex(i));
        }
      }
      std::uint64_t kmax = std::min<std::uint64_t>(schedule.subset_cap.value_or(pool.size()),
                                                   pool.size());
      for (std::uint64_t k = 0; k <= kmax && !result.truncated; ++k) {
        std::vector<std::size_t> pick(k);
        for (std::size_t t = 0; t < k; ++t) {
          pick[t] = t;
        }
        while (!result.truncated) {
          bool ok = !schedule.fresh_only;
          for (auto p : pick) {
            ok = ok || fresh_set.count(pool[p]) != 0;
          }
          if (ok) {
            std::uint64_t codes = 1;
            for (std::uint64_t t = 0; t < k; ++t) {
              codes *= L;
            }
            for (std::uint64_t code = 0; code < codes; ++code) {
              if (schedule.max_items && next >= *schedule.max_items) {
                result.truncated = true;
                break;
              }
              VertexName w = VertexName::witness(stage, next++);
              vertices.push_back(w);
              result.added.push_back(w);
              parts[w]          = kind == Kind::bipartite ? 1 - lane : 0;
              std::uint64_t rem = code;
              for (std::size_t t = k; t-- > 0;) {
                std::uint64_t     label = rem % L;
                VertexName const& a     = pool[pick[t]];
                rem /= L;
                if (kind != Kind::digraph) {
                  edges.emplace_back(a, w);
                } else {
                  if (label != arc_in) {
                    edges.emplace_back(w, a);
                  }
                  if (label != arc_out) {
                    edges.emplace_back(a, w);
                  }
                }
              }
            }
          }
          // next k-combination in lexicographic order
          std::size_t t = k;
          while (t > 0 && pick[t - 1] == pool.size() - k + t - 1) {
            --t;
          }
          if (t == 0) {
            break;
          }
          ++pick[t - 1];
          for (std::size_t u = t; u < k; ++u) {
            pick[u] = pick[u - 1] + 1;
          }
        }
      }
    }
    switch (kind) {
      case Kind::graph:
        result.structure = Structure::graph(std::move(vertices), edges);
        break;
      case Kind::digraph:
        result.structure = Structure::digraph(std::move(vertices), edges);
        break;
      case Kind::bipartite:
        result.structure = Structure::bipartite(std::move(vertices), parts, edges);
        break;
    }
    return result;
  }

  Structure eager_stage(Structure const& seed, StagePlan const& plan, std::uint64_t n) {
    std::uint64_t offset = 0;
    for (auto const& v : seed.vertices()) {
      offset = std::max(offset, v.stage_rank());
    }
    Structure               current = seed;
    std::vector<VertexName> fresh;
    for (std::uint64_t s = 1; s <= n; ++s) {
      StageSchedule schedule;
      schedule.subset_cap = plan.cap(s);
      schedule.fresh_only = plan.mode == Reenumeration::fresh_only && s >= 2;
      schedule.name_stage = offset + s;
      auto result         = witness_stage(current, schedule, fresh);
      current             = std::move(result.structure);
      fresh               = std::move(result.added);
    }
    return current;
  }

  ////////////////////////////////////////////////////////////////////////
  // Existential closure
  ////////////////////////////////////////////////////////////////////////

  namespace {
    VertexName find_ec(LazyLimit const&               L,
                       int                            part,
                       std::vector<Constraint> const& required,
                       std::vector<VertexName> const& none,
                       std::string const&             what) {
      std::set<VertexName> constrained;
      std::uint64_t        n0 = 0;
      for (auto const& c : required) {
        n0 = std::max(n0, L.stage_of(c.v));
        constrained.insert(c.v);
      }
      for (auto const& v : none) {
        n0 = std::max(n0, L.stage_of(v));
        if (!constrained.insert(v).second) {
          throw PreconditionError("the constraint sets must be disjoint");
        }
      }
      if (n0 > L.stages()) {
        throw CoverageError("constraint vertices lie beyond the plan");
      }
      bool const digraph = L.kind() == Kind::digraph;
      for (auto const& x : L.vertices_up_to(n0)) {
        if (constrained.count(x) != 0
            || (L.kind() == Kind::bipartite && L.part(x) != part)) {
          continue;
        }
        bool ok = true;
        for (auto const& c : required) {
          if (!ok) {
            break;
          }
          bool out = L.adjacent(x, c.v);
          bool in  = digraph ? L.adjacent(c.v, x) : out;
          std::uint8_t got = !digraph        ? (out ? label_bit(0) : std::uint8_t(0))
                             : out && in     ? label_bit(arc_both)
                             : out           ? label_bit(arc_out)
                             : in            ? label_bit(arc_in)
                                             : std::uint8_t(0);
          ok = (got & c.mask) != 0;
        }
        for (auto const& v : none) {
          ok = ok && !L.adjacent(x, v) && !L.adjacent(v, x);
        }
        if (ok) {
          return x;
        }
      }
      for (std::uint64_t s = n0 + 1; s <= L.stages(); ++s) {
        if (auto w = L.nth_item(s, part, required, none, 0)) {
          return *w;
        }
      }
      throw CoverageError("no witness for " + what + " within the plan's "
                          + std::to_string(L.stages()) + " stages");
    }

    std::string describe_pair(std::vector<VertexName> const& U,
                              std::vector<VertexName> const& V) {
      return "U = " + describe(U) + ", V = " + describe(V);
    }
  }  // namespace

  VertexName find_ec_witness(LazyLimit const&               L,
                             std::vector<VertexName> const& U,
                             std::vector<VertexName> const& V) {
    if (L.kind() != Kind::graph) {
      throw PreconditionError("this form of find_ec_witness expects a graph limit");
    }
    std::vector<Constraint> req;
    for (auto const& u : U) {
      req.push_back({u, label_bit(0)});
    }
    return find_ec(L, 0, req, V, describe_pair(U, V));
  }

  VertexName find_ec_witness(LazyLimit const& L, DigraphType const& type) {
    if (L.kind() != Kind::digraph) {
      throw PreconditionError("this form of find_ec_witness expects a digraph limit");
    }
    std::vector<Constraint> req;
    for (auto const& v : type.out) {
      req.push_back({v, label_bit(arc_out)});
    }
    for (auto const& v : type.in) {
      req.push_back({v, label_bit(arc_in)});
    }
    for (auto const& v : type.both) {
      req.push_back({v, label_bit(arc_both)});
    }
    std::set<VertexName> seen;
    for (auto const& c : req) {
      if (!seen.insert(c.v).second) {
        throw PreconditionError("the constraint sets must be disjoint");
      }
    }
    return find_ec(L, 0, req, type.none,
                   "out = " + describe(type.out) + ", in = " + describe(type.in)
                       + ", both = " + describe(type.both)
                       + ", none = " + describe(type.none));
  }

  VertexName find_ec_witness_bipartite(LazyLimit const&               L,
                                       int                            part,
                                       std::vector<VertexName> const& U,
                                       std::vector<VertexName> const& V) {
    if (L.kind() != Kind::bipartite) {
      throw PreconditionError("find_ec_witness_bipartite expects a bipartite limit");
    }
    if (part != 0 && part != 1) {
      throw PreconditionError("parts are 0 and 1");
    }
    std::vector<Constraint> req;
    for (auto const& u : U) {
      if (L.part(u) == part) {
        throw PreconditionError(u.to_string() + " lies in the witness's own part and "
                                "cannot be adjacent to it");
      }
      req.push_back({u, label_bit(0)});
    }
    return find_ec(L, part, req, V, "part " + std::to_string(part) + ", "
                                        + describe_pair(U, V));
  }

}  // namespace forge
