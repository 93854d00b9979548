#pragma once

// Property sweeps over the word algebras with deterministic reports:
//   - word-level associativity of the shuffle, diamond, and stuffle products,
//   - coassociativity of both coproducts,
//   - compatibility of each coproduct with its product,
//   - Hopf axioms (counit contractions and antipode convolutions),
//   - golden-table comparison of depth-one coproducts against pinned
//     fixture files.
//
// Failures never abort a sweep; they are accumulated so one run characterizes
// the whole failure set. Sweeps fan out over independent items: each worker
// owns its engines, results land in a pre-sized slot per item, and the report
// is folded in item order, so output is identical for any worker count.

#include <chrono>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "mzv/coalgebra.hpp"
#include "mzv/sha256.hpp"
#include "mzv/text_io.hpp"

namespace mzv {

struct CheckItem {
  std::string name;
  bool pass = false;
  std::string lhs, rhs;  // serialized sides, filled on failure
};

struct Report {
  std::string kind;
  std::map<std::string, std::string> params;
  u64 checked = 0;
  u64 failed = 0;
  std::vector<CheckItem> failures;
  std::vector<CheckItem> items;  // every check, when recorded
  bool items_recorded = true;
  std::vector<std::string> errors;
  double total_ms = 0.0;

  bool all_pass() const { return failed == 0; }
  double per_1000_ms() const { return checked == 0 ? 0.0 : total_ms * 1000.0 / static_cast<double>(checked); }

  std::string to_text() const {
    std::ostringstream out;
    out << "[" << kind << "]";
    for (const auto& [k, v] : params) out << " " << k << "=" << v;
    out << "\n";
    out << "  checks=" << checked << " failures=" << failed << " errors=" << errors.size() << "\n";
    std::ostringstream ms;
    ms.setf(std::ios::fixed);
    ms.precision(2);
    ms << total_ms << " ms total, " << per_1000_ms() << " ms per 1000 checks";
    out << "  time: " << ms.str() << "\n";
    for (const auto& f : failures) {
      out << "  FAIL " << f.name << "\n";
      out << "    lhs: " << f.lhs << "\n";
      out << "    rhs: " << f.rhs << "\n";
    }
    for (const auto& e : errors) out << "  ERROR " << e << "\n";
    return out.str();
  }

  nlohmann::json to_json() const {
    nlohmann::json jfail = nlohmann::json::array();
    for (const auto& f : failures) jfail.push_back({{"name", f.name}, {"lhs", f.lhs}, {"rhs", f.rhs}});
    nlohmann::json jitems = nlohmann::json::array();
    if (items_recorded)
      for (const auto& it : items) jitems.push_back({{"name", it.name}, {"pass", it.pass}});
    return {{"format", "mzv.report/1"},
            {"kind", kind},
            {"params", params},
            {"checked", checked},
            {"failed", failed},
            {"errors", errors},
            {"failures", jfail},
            {"items_recorded", items_recorded},
            {"items", jitems},
            {"total_ms", total_ms},
            {"per_1000_checks_ms", per_1000_ms()}};
  }
};

struct SweepOptions {
  u32 jobs = 1;
  bool record_items = true;
};

enum class AlgebraSide { shuffle, stuffle };

inline const char* side_name(AlgebraSide s) { return s == AlgebraSide::shuffle ? "shuffle" : "stuffle"; }

namespace verify_detail {

// Runs one CheckItem per input item, block-partitioned over workers; each
// worker builds its own engine so scheduling cannot influence any result.
template <typename Item, typename Fn>
void run_sweep(Report& rep, const FieldSpec& f, const std::vector<Item>& items, const SweepOptions& opt, Fn check_one) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<CheckItem> results(items.size());
  size_t n = items.size();
  u32 jobs = std::max<u32>(1, opt.jobs);
  if (n > 0 && jobs > n) jobs = static_cast<u32>(n);
  if (jobs <= 1) {
    CoalgebraEngine eng(f);
    for (size_t i = 0; i < n; ++i) results[i] = check_one(eng, items[i]);
  } else {
    size_t chunk = (n + jobs - 1) / jobs;
    std::vector<std::thread> pool;
    for (u32 t = 0; t < jobs; ++t) {
      size_t lo = static_cast<size_t>(t) * chunk, hi = std::min(n, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi]() {
        CoalgebraEngine eng(f);
        for (size_t i = lo; i < hi; ++i) results[i] = check_one(eng, items[i]);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& r : results) {
    ++rep.checked;
    if (!r.pass) {
      ++rep.failed;
      rep.failures.push_back(r);
    }
    if (opt.record_items) rep.items.push_back(std::move(r));
  }
  rep.items_recorded = opt.record_items;
  rep.total_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

inline CheckItem compare_lincomb(std::string name, const LinComb& lhs, const LinComb& rhs) {
  CheckItem it;
  it.name = std::move(name);
  it.pass = (lhs == rhs);
  if (!it.pass) {
    it.lhs = canonical_serialize(lhs);
    it.rhs = canonical_serialize(rhs);
  }
  return it;
}

inline CheckItem compare_tensor2(std::string name, const Tensor2& lhs, const Tensor2& rhs) {
  CheckItem it;
  it.name = std::move(name);
  it.pass = (lhs == rhs);
  if (!it.pass) {
    it.lhs = canonical_serialize(lhs);
    it.rhs = canonical_serialize(rhs);
  }
  return it;
}

inline CheckItem compare_tensor3(std::string name, const Tensor3& lhs, const Tensor3& rhs) {
  CheckItem it;
  it.name = std::move(name);
  it.pass = (lhs == rhs);
  if (!it.pass) {
    it.lhs = canonical_serialize(lhs);
    it.rhs = canonical_serialize(rhs);
  }
  return it;
}

}  // namespace verify_detail

// (u o v) o w = u o (v o w) for the chosen products, over all word triples of
// total weight <= max_total_weight (depth-one triples only when requested).
inline Report sweep_associativity_words(const FieldSpec& f, u32 max_total_weight, bool depth_one_only = false,
                                        const std::vector<std::string>& ops = {"shuffle", "diamond", "stuffle"},
                                        SweepOptions opt = {}) {
  Report rep;
  rep.kind = "associativity";
  rep.params = {{"q", std::to_string(f.q())},
                {"max_total_weight", std::to_string(max_total_weight)},
                {"depth_one_only", depth_one_only ? "true" : "false"}};
  for (const std::string& op : ops)
    if (op != "shuffle" && op != "diamond" && op != "stuffle")
      throw std::invalid_argument("unknown product name: " + op);
  struct Item {
    std::string op;
    Word u, v, w;
  };
  std::vector<Word> pool;
  if (depth_one_only) {
    for (u32 n = 1; n <= max_total_weight; ++n) pool.push_back(Word::letter(n));
  } else {
    pool = words_up_to_weight(max_total_weight);
  }
  std::vector<Item> items;
  for (const std::string& op : ops)
    for (const Word& u : pool)
      for (const Word& v : pool) {
        if (u.weight() + v.weight() > max_total_weight) continue;
        for (const Word& w : pool) {
          if (u.weight() + v.weight() + w.weight() > max_total_weight) continue;
          items.push_back({op, u, v, w});
        }
      }
  verify_detail::run_sweep(rep, f, items, opt, [&f](CoalgebraEngine& eng, const Item& it) {
    ProductEngine& pe = eng.products();
    LinComb lu = LinComb::of_word(f, it.u), lv = LinComb::of_word(f, it.v), lw = LinComb::of_word(f, it.w);
    LinComb (ProductEngine::*op)(const LinComb&, const LinComb&) = nullptr;
    if (it.op == "shuffle") op = &ProductEngine::shuffle;
    else if (it.op == "diamond") op = &ProductEngine::diamond;
    else if (it.op == "stuffle") op = &ProductEngine::stuffle;
    else throw std::invalid_argument("unknown product name: " + it.op);
    LinComb left = (pe.*op)((pe.*op)(lu, lv), lw);
    LinComb right = (pe.*op)(lu, (pe.*op)(lv, lw));
    return verify_detail::compare_lincomb(
        it.op + "(" + word_to_text(it.u) + "," + word_to_text(it.v) + "," + word_to_text(it.w) + ")", left, right);
  });
  return rep;
}

// (Delta (x) id) Delta = (id (x) Delta) Delta over all words of weight
// <= all_words_weight_upto plus the single letters x_n for n up to
// depth_one_upto.
inline Report sweep_coassociativity(const FieldSpec& f, u64 depth_one_upto, u32 all_words_weight_upto,
                                    AlgebraSide side = AlgebraSide::shuffle, SweepOptions opt = {}) {
  Report rep;
  rep.kind = "coassociativity";
  rep.params = {{"q", std::to_string(f.q())},
                {"depth_one_upto", std::to_string(depth_one_upto)},
                {"all_words_weight_upto", std::to_string(all_words_weight_upto)},
                {"side", side_name(side)}};
  std::vector<Word> items = words_up_to_weight(all_words_weight_upto);
  for (u64 n = all_words_weight_upto + 1; n <= depth_one_upto; ++n) items.push_back(Word::letter(static_cast<u32>(n)));
  verify_detail::run_sweep(rep, f, items, opt, [&f, side](CoalgebraEngine& eng, const Word& u) {
    std::function<Tensor2(const Word&)> g;
    Tensor2 d(f);
    if (side == AlgebraSide::shuffle) {
      g = [&eng](const Word& w) { return eng.coproduct_shuffle(w); };
      d = eng.coproduct_shuffle(u);
    } else {
      g = [&f](const Word& w) { return coproduct_stuffle(f, w); };
      d = coproduct_stuffle(f, u);
    }
    return verify_detail::compare_tensor3(word_to_text(u), extend_left_to_t3(g, d), extend_right_to_t3(g, d));
  });
  return rep;
}

// Delta(u o v) = Delta(u) Delta(v) componentwise, for the chosen
// product/coproduct pair, over all word pairs of total weight
// <= max_total_weight.
inline Report sweep_compatibility(const FieldSpec& f, u32 max_total_weight, AlgebraSide side = AlgebraSide::shuffle,
                                  SweepOptions opt = {}) {
  Report rep;
  rep.kind = "compatibility";
  rep.params = {{"q", std::to_string(f.q())},
                {"max_total_weight", std::to_string(max_total_weight)},
                {"side", side_name(side)}};
  struct Item {
    Word u, v;
  };
  std::vector<Item> items;
  std::vector<Word> pool = words_up_to_weight(max_total_weight);
  for (const Word& u : pool)
    for (const Word& v : pool) {
      if (u.weight() + v.weight() > max_total_weight) continue;
      items.push_back({u, v});
    }
  verify_detail::run_sweep(rep, f, items, opt, [&f, side](CoalgebraEngine& eng, const Item& it) {
    std::string name = "(" + word_to_text(it.u) + "," + word_to_text(it.v) + ")";
    if (side == AlgebraSide::shuffle) {
      Tensor2 lhs = eng.coproduct_shuffle(eng.products().shuffle_words(it.u, it.v));
      Tensor2 rhs = eng.tensor_shuffle(eng.coproduct_shuffle(it.u), eng.coproduct_shuffle(it.v));
      return verify_detail::compare_tensor2(std::move(name), lhs, rhs);
    }
    Tensor2 lhs = coproduct_stuffle(eng.products().stuffle_words(it.u, it.v));
    Tensor2 rhs = eng.tensor_stuffle(coproduct_stuffle(f, it.u), coproduct_stuffle(f, it.v));
    return verify_detail::compare_tensor2(std::move(name), lhs, rhs);
  });
  return rep;
}

// Counit contractions and both antipode convolution identities over all
// words of weight <= max_weight, on the chosen algebra side.
inline Report sweep_hopf_axioms(const FieldSpec& f, u32 max_weight, AlgebraSide side = AlgebraSide::shuffle,
                                SweepOptions opt = {}) {
  Report rep;
  rep.kind = "hopf-axioms";
  rep.params = {{"q", std::to_string(f.q())},
                {"max_weight", std::to_string(max_weight)},
                {"side", side_name(side)}};
  struct Item {
    Word u;
    int which;  // 0/1: counit left/right, 2/3: antipode convolution left/right
  };
  std::vector<Item> items;
  for (const Word& u : words_up_to_weight(max_weight))
    for (int which = 0; which < 4; ++which) items.push_back({u, which});
  verify_detail::run_sweep(rep, f, items, opt, [&f, side](CoalgebraEngine& eng, const Item& it) {
    static const char* kNames[4] = {"counit_left", "counit_right", "antipode_left", "antipode_right"};
    std::string name = std::string(kNames[it.which]) + ":" + word_to_text(it.u);
    Tensor2 d = (side == AlgebraSide::shuffle) ? Tensor2(eng.coproduct_shuffle(it.u)) : coproduct_stuffle(f, it.u);
    if (it.which == 0)
      return verify_detail::compare_lincomb(std::move(name), contract_counit_left(d), LinComb::of_word(f, it.u));
    if (it.which == 1)
      return verify_detail::compare_lincomb(std::move(name), contract_counit_right(d), LinComb::of_word(f, it.u));
    ProductEngine& pe = eng.products();
    LinComb acc(f);
    for (const auto& [k, c] : d.terms()) {
      LinComb left = (it.which == 2)
                         ? (side == AlgebraSide::shuffle ? eng.antipode_shuffle(k.first) : eng.antipode_stuffle(k.first))
                         : LinComb::of_word(f, k.first);
      LinComb right = (it.which == 3)
                          ? (side == AlgebraSide::shuffle ? eng.antipode_shuffle(k.second) : eng.antipode_stuffle(k.second))
                          : LinComb::of_word(f, k.second);
      acc.add_scaled_inplace(c, side == AlgebraSide::shuffle ? pe.shuffle(left, right) : pe.stuffle(left, right));
    }
    LinComb expect = scale(counit(LinComb::of_word(f, it.u)), LinComb::one(f));
    return verify_detail::compare_lincomb(std::move(name), acc, expect);
  });
  return rep;
}

namespace verify_detail {

struct GoldenFixture {
  std::map<u64, std::string> rows;
  std::string sha256;
};

inline GoldenFixture read_golden_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture file: " + path);
  GoldenFixture fx;
  fx.sha256 = sha256_file_hex(path);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": fixture row is not of the form n<TAB>tensor");
    u64 n = 0;
    try {
      n = std::stoull(line.substr(0, tab));
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": fixture row weight is not numeric");
    }
    fx.rows[n] = line.substr(tab + 1);
  }
  return fx;
}

}  // namespace verify_detail

// Depth-one coproducts against a fixture table of canonical tensor texts.
// An expected checksum (when nonempty) guards the fixture against silent
// edits; a mismatch aborts the comparison with an error. Rows absent from
// the fixture inside the requested range are reported as errors naming n.
inline Report golden_tables(const FieldSpec& f, u64 n_lo, u64 n_hi, const std::string& fixture_path,
                            const std::string& expected_sha256 = "", SweepOptions opt = {}) {
  Report rep;
  rep.kind = "golden-tables";
  rep.params = {{"q", std::to_string(f.q())},
                {"n_lo", std::to_string(n_lo)},
                {"n_hi", std::to_string(n_hi)},
                {"fixture", fixture_path}};
  verify_detail::GoldenFixture fx;
  try {
    fx = verify_detail::read_golden_fixture(fixture_path);
  } catch (const std::exception& ex) {
    rep.errors.push_back(ex.what());
    return rep;
  }
  rep.params["fixture_sha256"] = fx.sha256;
  if (!expected_sha256.empty() && fx.sha256 != expected_sha256) {
    rep.errors.push_back("fixture checksum mismatch for " + fixture_path + ": got " + fx.sha256 + ", pinned " + expected_sha256);
    return rep;
  }
  std::vector<u64> items;
  for (u64 n = n_lo; n <= n_hi; ++n) {
    if (fx.rows.count(n)) {
      items.push_back(n);
    } else {
      rep.errors.push_back("no fixture row for n=" + std::to_string(n));
    }
  }
  verify_detail::run_sweep(rep, f, items, opt, [&f, &fx](CoalgebraEngine& eng, u64 n) {
    CheckItem it;
    it.name = "x" + std::to_string(n);
    const std::string& row = fx.rows.at(n);
    const Tensor2& got = eng.coproduct_shuffle(Word::letter(static_cast<u32>(n)));
    Tensor2 expect(f);
    bool parsed = true;
    try {
      expect = parse_tensor2(f, row);
    } catch (const std::exception&) {
      parsed = false;
    }
    it.pass = parsed && got == expect;
    if (!it.pass) {
      it.lhs = canonical_serialize(got);
      it.rhs = row;
    }
    return it;
  });
  return rep;
}

// Pinned checksums of the fixture tables shipped with the repository.
inline std::string golden_fixture_sha256(u64 q) {
  if (q == 3) return "cb6cabe2b9153fe3fea8fed2d6d076b40be244ec40e7ffd05242f0c7ef130e56";
  if (q == 5) return "ac73446c49cc60a129e25030e0eb67ee3e2192bb40cbc4324e9d1653ab4666f4";
  return "";
}

// Inclusive sweep bounds bundled as presets for each supported field size;
// a zero entry means no bundled bound for that sweep.
struct SweepPresets {
  u64 assoc_depth_one_total_upto = 0;
  u64 coassoc_depth_one_upto = 0;
  u32 coassoc_all_words_upto = 0;
  u32 compat_total_upto = 0;
};

inline SweepPresets sweep_presets(u64 q) {
  SweepPresets p;
  switch (q) {
    case 2: p = {7, 32, 14, 12}; break;
    case 3: p = {26, 61, 13, 12}; break;
    case 4: p = {63, 0, 0, 12}; break;
    case 5: p = {124, 121, 17, 12}; break;
    case 7: p = {342, 181, 17, 12}; break;
    case 8: p = {0, 299, 17, 12}; break;
    case 9: p = {0, 301, 17, 13}; break;
    case 11: p = {0, 299, 17, 12}; break;
    case 13: p = {0, 381, 17, 12}; break;
    default: break;
  }
  return p;
}

}  // namespace mzv
