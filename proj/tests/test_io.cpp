#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "gkz/error.hpp"
#include "gkz/io.hpp"

using namespace gkz;
using nlohmann::json;

namespace {

std::string problem_path(const std::string &name)
{
    return std::string(GKZ_PROBLEM_DIR) + "/" + name;
}

json e2_json()
{
    return json::parse(R"({
      "schema": "gkz-asym/1",
      "B": [[2, 3]],
      "sigma": [1],
      "gamma": [{"re": "-1", "im": "0"}],
      "x": [{"re": "1", "im": "0", "arg_over_pi": "0"}, {"re": "-1", "im": "0"}]
    })");
}

ErrorKind kind_of(const json &j)
{
    try {
        problem_from_json(j);
    } catch (const Error &e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvalidArgument;
}

} // namespace

TEST_CASE("shipped problem files load")
{
    const ProblemFile e1 = load_problem(problem_path("E1.json"));
    CHECK(e1.problem.B == IntMatrix::from_rows({{1, 2}}));
    CHECK(e1.problem.sigma == IndexSet{0});

    const ProblemFile e2 = load_problem(problem_path("E2.json"));
    CHECK(e2.problem.B == IntMatrix::from_rows({{2, 3}}));
    CHECK_FALSE(e2.delta.has_value());
    REQUIRE(e2.epsilon.has_value());
    CHECK(*e2.epsilon == 0.1);
    // x2 = −1 without an explicit argument takes the principal one.
    CHECK(e2.problem.x[1].arg_over_pi.exact == Rat(1));

    const ProblemFile e3 = load_problem(problem_path("E3.json"));
    CHECK(e3.problem.B == IntMatrix::from_rows({{2, 1, 1, 2}, {0, 2, 1, 2}}));
    CHECK(e3.problem.sigma == IndexSet{0, 1});
    CHECK(e3.problem.x.size() == 4);
}

TEST_CASE("save and load round-trip")
{
    const auto dir = std::filesystem::temp_directory_path();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (const char *name : {"E1.json", "E2.json", "E3.json"}) {
        ProblemFile pf = load_problem(problem_path(name));
        // Doubles with awkward binary expansions must survive.
        for (auto &g : pf.problem.gamma) {
            g = Complex(u(rng), u(rng));
        }
        pf.delta = std::vector<HybridReal>(pf.problem.sigma.size(), HybridReal(Rat(1, 3)));
        const std::string path = (dir / ("gkz_io_" + std::string(name))).string();
        save_problem(path, pf);
        const ProblemFile back = load_problem(path);
        std::remove(path.c_str());
        CHECK(same_problem(pf.problem, back.problem));
        REQUIRE(back.delta.has_value());
        CHECK((*back.delta)[0].exact == Rat(1, 3));
        CHECK(back.p == pf.p);
    }
}

TEST_CASE("format_double round-trips")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        REQUIRE(parse_double(format_double(v), "v") == v);
    }
    CHECK_THROWS_AS(parse_double("abc", "v"), Error);
}

TEST_CASE("malformed files")
{
    json j = e2_json();
    CHECK_NOTHROW(problem_from_json(j));

    json zero = e2_json();
    zero["x"][0] = {{"re", "0"}, {"im", "0"}, {"arg_over_pi", "0"}};
    CHECK(kind_of(zero) == ErrorKind::ParseError);

    json frac = e2_json();
    frac["B"][0][1] = 1.5;
    CHECK(kind_of(frac) == ErrorKind::ParseError);

    json no_arg = e2_json();
    no_arg["x"][0].erase("arg_over_pi");
    CHECK(kind_of(no_arg) == ErrorKind::ParseError);

    json inconsistent = e2_json();
    inconsistent["x"][0]["arg_over_pi"] = "1";
    CHECK(kind_of(inconsistent) == ErrorKind::ParseError);

    json bad_sigma = e2_json();
    bad_sigma["sigma"] = json::array({3});
    CHECK(kind_of(bad_sigma) == ErrorKind::ParseError);

    json schema = e2_json();
    schema["schema"] = "gkz-asym/0";
    CHECK(kind_of(schema) == ErrorKind::SchemaVersionMismatch);

    json mode = e2_json();
    mode["mode"] = "fast";
    CHECK(kind_of(mode) == ErrorKind::ParseError);

    try {
        load_problem(problem_path("does_not_exist.json"));
        FAIL("expected ParseError");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::ParseError);
    }
}

TEST_CASE("an explicit argument off the principal branch is kept")
{
    json j = e2_json();
    j["x"][0] = {{"re", "1"}, {"im", "0"}, {"arg_over_pi", "2"}};
    const ProblemFile pf = problem_from_json(j);
    CHECK(pf.problem.x[0].arg_over_pi.exact == Rat(2));
}
