#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <set>

#include "mzv/verify.hpp"

using namespace mzv;

namespace {
std::string fixture_path(const char* name) { return std::string(MZV_SOURCE_DIR) + "/fixtures/" + name; }

nlohmann::json json_without_timing(const Report& r) {
  nlohmann::json j = r.to_json();
  j.erase("total_ms");
  j.erase("per_1000_checks_ms");
  return j;
}
}  // namespace

TEST_CASE("sha256 known answers") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex(std::string(1000, 'a')) == sha256_hex(std::string(500, 'a') + std::string(500, 'a')));
  CHECK_THROWS_AS(sha256_file_hex("no_such_file.bin"), std::runtime_error);
}

TEST_CASE("shipped fixtures carry the pinned checksums") {
  CHECK(sha256_file_hex(fixture_path("coproduct_depth1_q3.txt")) == golden_fixture_sha256(3));
  CHECK(sha256_file_hex(fixture_path("coproduct_depth1_q5.txt")) == golden_fixture_sha256(5));
  CHECK(golden_fixture_sha256(7).empty());
}

TEST_CASE("associativity sweeps") {
  FieldSpec f2(2), f3(3);

  Report small = sweep_associativity_words(f3, 3, /*depth_one_only=*/true);
  CHECK(small.all_pass());
  CHECK(small.checked == 3);  // (x1,x1,x1) for each of the three products
  CHECK(small.items.size() == 3);

  Report vacuous = sweep_associativity_words(f3, 2, /*depth_one_only=*/true);
  CHECK(vacuous.all_pass());
  CHECK(vacuous.checked == 0);

  Report depth_one = sweep_associativity_words(f2, 7, /*depth_one_only=*/true);
  CHECK(depth_one.all_pass());
  CHECK(depth_one.checked > 0);

  Report all_words = sweep_associativity_words(f3, 6, /*depth_one_only=*/false);
  CHECK(all_words.all_pass());
  CHECK(all_words.checked > depth_one.checked);

  CHECK_THROWS_AS(sweep_associativity_words(f3, 3, false, {"frobnicate"}), std::invalid_argument);
}

TEST_CASE("coassociativity sweeps") {
  FieldSpec f3(3);
  Report sh = sweep_coassociativity(f3, 30, 7, AlgebraSide::shuffle);
  CHECK(sh.all_pass());
  CHECK(sh.checked == 128 + 23);  // words of weight <= 7 plus letters 8..30
  Report st = sweep_coassociativity(f3, 12, 6, AlgebraSide::stuffle);
  CHECK(st.all_pass());
}

TEST_CASE("sweep reports are identical for any worker count") {
  FieldSpec f3(3);
  SweepOptions serial, parallel;
  serial.jobs = 1;
  parallel.jobs = 4;
  Report a = sweep_coassociativity(f3, 20, 6, AlgebraSide::shuffle, serial);
  Report b = sweep_coassociativity(f3, 20, 6, AlgebraSide::shuffle, parallel);
  CHECK(json_without_timing(a) == json_without_timing(b));

  Report c = sweep_compatibility(f3, 7, AlgebraSide::shuffle, serial);
  Report d = sweep_compatibility(f3, 7, AlgebraSide::shuffle, parallel);
  CHECK(json_without_timing(c) == json_without_timing(d));
}

TEST_CASE("compatibility sweeps") {
  FieldSpec f3(3);
  Report sh = sweep_compatibility(f3, 7, AlgebraSide::shuffle);
  CHECK(sh.all_pass());
  CHECK(sh.checked > 0);
  Report st = sweep_compatibility(f3, 7, AlgebraSide::stuffle);
  CHECK(st.all_pass());
  CHECK(st.checked == sh.checked);
}

TEST_CASE("hopf axiom sweeps") {
  for (FieldSpec f : {FieldSpec(2), FieldSpec(3)}) {
    Report sh = sweep_hopf_axioms(f, 6, AlgebraSide::shuffle);
    CHECK(sh.all_pass());
    CHECK(sh.checked == 4 * 64);  // four axioms per word of weight <= 6
    Report st = sweep_hopf_axioms(f, 6, AlgebraSide::stuffle);
    CHECK(st.all_pass());
    CHECK(st.checked == 4 * 64);
  }
}

TEST_CASE("monotonic restriction of passing sweeps") {
  FieldSpec f3(3);
  Report big = sweep_coassociativity(f3, 10, 8, AlgebraSide::shuffle);
  Report sub = sweep_coassociativity(f3, 8, 5, AlgebraSide::shuffle);
  REQUIRE(big.all_pass());
  CHECK(sub.all_pass());
  std::set<std::string> big_names;
  for (const auto& it : big.items) big_names.insert(it.name);
  for (const auto& it : sub.items) CHECK(big_names.count(it.name) == 1);
}

TEST_CASE("golden tables match the pinned fixtures") {
  FieldSpec f3(3);
  Report g3 = golden_tables(f3, 10, 36, fixture_path("coproduct_depth1_q3.txt"), golden_fixture_sha256(3));
  CHECK(g3.all_pass());
  CHECK(g3.checked == 27);
  CHECK(g3.errors.empty());

  FieldSpec f5(5);
  Report g5 = golden_tables(f5, 26, 151, fixture_path("coproduct_depth1_q5.txt"), golden_fixture_sha256(5));
  CHECK(g5.all_pass());
  CHECK(g5.checked == 125);
  REQUIRE(g5.errors.size() == 1);
  CHECK(g5.errors[0] == "no fixture row for n=132");
}

TEST_CASE("golden tables reject checksum drift and missing files") {
  FieldSpec f3(3);
  Report bad = golden_tables(f3, 10, 12, fixture_path("coproduct_depth1_q3.txt"), std::string(64, '0'));
  CHECK(bad.checked == 0);
  REQUIRE(bad.errors.size() == 1);
  CHECK(bad.errors[0].find("checksum mismatch") != std::string::npos);

  Report missing = golden_tables(f3, 10, 12, fixture_path("no_such_fixture.txt"), "");
  CHECK(missing.checked == 0);
  CHECK(missing.errors.size() == 1);
}

TEST_CASE("golden tables record row mismatches without aborting") {
  const char* path = "verify_golden_test.tmp";
  {
    std::ofstream out(path);
    out << "# scratch table\n";
    out << "2\t1 (x) x2 + x2 (x) 1\n";
    out << "4\t1 (x) x4 + x4 (x) 1\n";  // wrong on purpose: the true value has a middle term
    out << "5\t1 (x) x5 + x3 (x) x2 + x5 (x) 1\n";
    out << "6\tthis row does not parse\n";
  }
  FieldSpec f3(3);
  Report r = golden_tables(f3, 2, 6, path, "");
  std::remove(path);
  CHECK(r.checked == 4);
  CHECK(r.failed == 2);  // the wrong row and the unparseable row
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0] == "no fixture row for n=3");
  REQUIRE(r.failures.size() == 2);
  CHECK(r.failures[0].name == "x4");
  CHECK(r.failures[0].lhs == "1 (x) x4 + 2*x2 (x) x2 + x4 (x) 1");
  CHECK(r.failures[0].rhs == "1 (x) x4 + x4 (x) 1");
  CHECK(r.failures[1].name == "x6");
}

TEST_CASE("report serialization") {
  FieldSpec f3(3);
  Report r = sweep_hopf_axioms(f3, 3, AlgebraSide::shuffle);
  std::string text = r.to_text();
  CHECK(text.find("[hopf-axioms]") != std::string::npos);
  CHECK(text.find("q=3") != std::string::npos);
  CHECK(text.find("failures=0") != std::string::npos);

  nlohmann::json j = r.to_json();
  CHECK(j.at("format") == "mzv.report/1");
  CHECK(j.at("checked").get<u64>() == r.checked);
  CHECK(j.at("failed").get<u64>() == 0);
  CHECK(j.at("params").at("side") == "shuffle");
  CHECK(j.at("items").size() == r.checked);

  SweepOptions lean;
  lean.record_items = false;
  Report r2 = sweep_hopf_axioms(f3, 3, AlgebraSide::shuffle, lean);
  nlohmann::json j2 = r2.to_json();
  CHECK(j2.at("items_recorded") == false);
  CHECK(j2.at("items").empty());
}

TEST_CASE("bundled sweep presets") {
  SweepPresets p3 = sweep_presets(3);
  CHECK(p3.assoc_depth_one_total_upto == 26);
  CHECK(p3.coassoc_depth_one_upto == 61);
  CHECK(p3.coassoc_all_words_upto == 13);
  CHECK(p3.compat_total_upto == 12);
  CHECK(sweep_presets(9).compat_total_upto == 13);
  CHECK(sweep_presets(4).coassoc_depth_one_upto == 0);
  CHECK(sweep_presets(6).compat_total_upto == 0);
}
