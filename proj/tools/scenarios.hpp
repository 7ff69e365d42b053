#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "config.hpp"
#include "rdlab/operator1d.hpp"
#include "rdlab/rate.hpp"
#include "rdlab/reaction.hpp"

namespace rdlab::cli {

enum class ScenarioKind {
    ClassifyTerm,
    OsgoodDichotomy,
    VInfinityCurve,
    Thm1Certificate,
    Thm3Certificate,
    StationaryResiduals,
    UniversalCollapse,
    UniquenessProbe,
    NonuniquenessWitness,
    LongtimeLimit
};

const char* to_string(ScenarioKind k);

struct Scenario {
    std::string id;
    ScenarioKind kind;
    Block params;
    std::vector<std::string> outputs;  // artifact names relative to the scenario directory
};

struct Catalog {
    std::map<std::string, ReactionTerm> terms;
    std::map<std::string, Operator1D> operators;

    const ReactionTerm& term(const std::string& id) const;
    const Operator1D& op(const std::string& id) const;
};

struct Plan {
    Config config;
    Catalog catalog;
    std::vector<Scenario> scenarios;
};

/// Built-in terms and operators, then the config's own tables, then every scenario checked
/// for kind, keys and references. Throws ConfigError naming the offending key.
Plan build_plan(const Config& cfg);

/// name(a, b, ...) -> name and numeric arguments
std::pair<std::string, std::vector<double>> parse_call(const std::string& text, const std::string& where);
/// power(gamma,p) | iterlog(m,eps) | product(m) | logpower(q) | shiftedlog(q) | poly(a0,a1,...) | term(<id>)
RateFunction parse_rate(const std::string& text, const Catalog& cat);

std::string list_table(const Plan& plan);
std::string describe_table(const Plan& plan);

enum class Status { Passed, Failed, Inconclusive, Error };
const char* to_string(Status s);

struct ScenarioResult {
    std::string id;
    ScenarioKind kind;
    Status status = Status::Error;
    std::string message;
    std::vector<std::string> artifacts;  // paths relative to the output directory
    double seconds = 0.0;
};

struct RunOptions {
    std::string out_dir;
    int jobs = 1;
    std::string filter = "*";
    bool strict = false;
    std::string version = "0";
};

/// Executes the plan. Writes <out>/<id>/... artifacts, <out>/manifest.json (content hashes, no
/// timing) and <out>/timing.json. Returns the exit code.
int run_plan(const Plan& plan, const RunOptions& opts, std::ostream& log,
             std::vector<ScenarioResult>* results = nullptr);

std::string sha256_hex(const std::string& bytes);

}  // namespace rdlab::cli
