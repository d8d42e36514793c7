#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "otto/config.hpp"
#include "otto/errors.hpp"
#include "otto/io.hpp"
#include "otto/parallel.hpp"

using namespace otto;
using config::Json;

namespace {

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string temp_file(const std::string& name, const std::string& text) {
    const std::string path = std::string(P_tmpdir) + "/otto_test_" + name;
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST_CASE("defaults resolve to themselves") {
    const Json d = config::default_config();
    CHECK(config::resolve(Json::object()) == d);
    const auto baths = config::baths(d);
    CHECK(baths.hot.beta() == 1.0);
    CHECK(baths.cold.beta() == 2.0);
    CHECK(config::mode(d) == OperatingMode::Engine);
    CHECK(config::box(d).eps_max == 20.0);
}

TEST_CASE("unknown keys and type mismatches") {
    CHECK(message_of([] { config::resolve(Json::parse(R"({"beta_h": 1})")); }).find("beta_h") != std::string::npos);
    CHECK(message_of([] { config::resolve(Json::parse(R"({"simulate": {"eps": 1}})")); }).find("simulate.eps") !=
          std::string::npos);
    CHECK(message_of([] { config::resolve(Json::parse(R"({"beta_H": "one"})")); }).find("beta_H") !=
          std::string::npos);
    CHECK_THROWS_AS(config::resolve(Json::parse(R"({"hot": {"model": "fermi_power", "k": 1, "m": 2}})")),
                    ConfigError);
    CHECK_THROWS_AS(config::resolve(Json::parse(R"({"hot": {"model": "nonsense"}})")), ConfigError);
    CHECK_THROWS_AS(config::resolve(Json::parse(R"({"mode": "Q"})")), ConfigError);
    CHECK_THROWS_AS(config::baths(config::resolve(Json::parse(R"({"beta_H": -1})"))), ConfigError);
}

TEST_CASE("syntax errors carry line and column") {
    const std::string msg = message_of([] { config::parse_text("{\n  \"beta_H\": 1,\n  oops\n}", "cfg.json"); });
    CHECK(msg.find("cfg.json:3:") != std::string::npos);
}

TEST_CASE("semantic errors in files carry the key line") {
    const auto path = temp_file("bad.json", "{\n  \"beta_H\": 1,\n  \"beta_Q\": 2\n}\n");
    const std::string msg = message_of([&] { config::build(path, {}); });
    CHECK(msg.find(":3") != std::string::npos);
    CHECK(msg.find("beta_Q") != std::string::npos);
    std::remove(path.c_str());
    CHECK_THROWS_AS(config::load_file("/nonexistent/otto.json"), ConfigError);
}

TEST_CASE("overrides") {
    Json cfg = config::default_config();
    config::apply_override(cfg, "beta_C=3.5");
    config::apply_override(cfg, "mode=R");
    config::apply_override(cfg, "hot.k=2");
    config::apply_override(cfg, "sweep_cmp.C_c=[1,2]");
    CHECK(cfg["beta_C"] == 3.5);
    CHECK(cfg["mode"] == "R");
    CHECK(cfg["hot"]["k"] == 2);
    CHECK(cfg["sweep_cmp"]["C_c"].size() == 2);
    CHECK_THROWS_AS(config::apply_override(cfg, "beta_C"), ConfigError);
    CHECK_THROWS_AS(config::apply_override(cfg, "nope.x=1"), ConfigError);
    CHECK_THROWS_AS(config::apply_override(cfg, "hot.zeta=1"), ConfigError);

    const auto built = config::build("", {"cold={\"model\":\"lorentzian\",\"gamma\":1,\"sigma\":0.1,\"eps_bar\":1}"});
    CHECK(config::baths(built).cold.model().kind() == "lorentzian");
}

TEST_CASE("rate model round trip") {
    for (const auto& m : {RateModel::constant(0.5), RateModel::fermi_power(1.0, 2), RateModel::bose_power(2.0, 1),
                          RateModel::lorentzian(1.0, 0.15, 2.0), RateModel::gaussian_x(1.0, 2.0)}) {
        const auto back = config::rate_model_from_json(config::rate_model_to_json(m), "m");
        CHECK(back.fingerprint() == m.fingerprint());
    }
    CHECK(config::rate_model_from_tag_or_json(Json("B1"), "x").kind() == "bose_power");
    CHECK(config::rate_model_from_tag_or_json(Json("F0"), "x").fingerprint() ==
          RateModel::fermi_power(1.0, 0).fingerprint());
    CHECK_THROWS_AS(config::rate_model_from_tag_or_json(Json("Z3"), "x"), ConfigError);
}

TEST_CASE("number and csv formatting") {
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    CHECK(std::stod(io::format_double(M_PI)) == M_PI);
    CHECK(io::format_double(INFINITY) == "inf");
    CHECK(io::format_double(-INFINITY) == "-inf");
    CHECK(io::format_double(NAN) == "nan");
    CHECK(io::csv_field("plain") == "plain");
    CHECK(io::csv_field("a,b") == "\"a,b\"");
    CHECK(io::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");

    std::ostringstream os;
    io::CsvWriter w(os);
    w.comment("one\ntwo");
    w.header({"x", "name"});
    w.row({1.5, std::string("F0(k=1)")});
    w.row({2LL, std::string("a,b")});
    CHECK(os.str() == "# one\n# two\nx,name\n1.5,F0(k=1)\n2,\"a,b\"\n");
}

TEST_CASE("parallel_for covers every index once") {
    for (int threads : {1, 2, 5}) {
        std::vector<std::atomic<int>> hits(103);
        parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i]++; });
        for (auto& h : hits) CHECK(h == 1);
    }
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                        if (i == 7) throw DomainError("boom");
                    }),
                    DomainError);
}
