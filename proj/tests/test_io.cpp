#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rdlab/errors.hpp"
#include "rdlab/json_io.hpp"
#include "rdlab/ode_oracle.hpp"
#include "rdlab/pde.hpp"
#include "rdlab/trajectory_io.hpp"

using namespace rdlab;

namespace {

Trajectory small_run() {
    SolverOptions o;
    o.dx = 0.1;
    o.dt = 0.01;
    return solve_dirichlet([](double x) { return 1.0 - x * x; }, Operator1D::laplacian(),
                           ReactionTerm::pure_power(1.0, 2.0), -1.0, 1.0, {0.1, 0.2, 0.3}, Dirichlet::zero(), o);
}

}  // namespace

TEST_CASE("binary trajectory round trip") {
    Trajectory tr = small_run();
    std::stringstream ss;
    write_trajectory_binary(tr, ss);
    CHECK(ss.str().size() == 8 + 16 + 8 * tr.x.size() * tr.times.size());
    Trajectory back = read_trajectory_binary(ss);
    REQUIRE(back.frames.size() == tr.frames.size());
    for (std::size_t j = 0; j < tr.frames.size(); ++j) {
        CHECK(back.times[j] == doctest::Approx(tr.times[j]).epsilon(1e-15));
        for (std::size_t i = 0; i < tr.x.size(); ++i) CHECK(back.frames[j][i] == tr.frames[j][i]);
    }
}

TEST_CASE("binary layout rejects non-uniform frames") {
    SolverOptions o;
    o.dx = 0.1;
    o.dt = 0.01;
    auto tr = solve_dirichlet([](double) { return 0.0; }, Operator1D::laplacian(), ReactionTerm::zero(), -1.0, 1.0,
                              {0.1, 0.5}, Dirichlet::zero(), o);
    std::stringstream ss;
    CHECK_THROWS_AS(write_trajectory_binary(tr, ss), DomainError);
    std::stringstream truncated(std::string("\x05\x00\x00\x00", 4));
    CHECK_THROWS(read_trajectory_binary(truncated));
}

TEST_CASE("trajectory CSV layout") {
    Trajectory tr = small_run();
    std::ostringstream os;
    write_trajectory_csv(tr, os, {{"term", "minus_u2"}});
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "# term: minus_u2");
    std::getline(in, line);
    CHECK(line == "t,x,u");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == static_cast<int>(tr.x.size() * tr.times.size()));
}

TEST_CASE("json records carry the schema and encode non-finite numbers") {
    CHECK(num(INFINITY) == "inf");
    CHECK(num(-INFINITY) == "-inf");
    CHECK(num(NAN) == "nan");
    CHECK(num(1.5) == 1.5);
    RootReport r{2.0, 1.9, 2.1, 0.0, false};
    json j = to_json(r);
    CHECK(j["schema"] == kJsonSchema);
    CHECK(j.contains("kind"));
    CHECK(j["c0"] == 2.0);
    OsgoodResult o;
    o.convergent = true;
    o.value = 0.25;
    CHECK(to_json(o)["schema"] == 1);
    // dumps are stable
    CHECK(to_json(r).dump() == to_json(r).dump());
}
