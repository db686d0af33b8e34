// cminor: simulate minorant data, run verification suites, enumerate exact laws.
//
// Exit codes: 0 ok, 1 verification failure or tie, 2 usage error, 3 I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmin/suites.hpp"

namespace
{
using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;
constexpr int exit_io = 3;

struct IoError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

//! Writes to a file, or to stdout when the path is empty or "-".
void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-")
    {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open " + path + " for writing");
    os << text;
    if (!os.flush())
        throw IoError("write to " + path + " failed");
}

cmin::DistSpec parse_dist(const std::string& name, double p1, double p2, double alpha)
{
    if (name == "normal")
        return cmin::DistSpec::normal(p1, p2);
    if (name == "cauchy")
        return cmin::DistSpec::cauchy(p1, p2);
    if (name == "stable")
        return cmin::DistSpec::stable(alpha);
    if (name == "uniform")
        return cmin::DistSpec::uniform(p1, p2);
    if (name == "exponential")
        return cmin::DistSpec::exponential(p2);
    throw cmin::ParameterError("unknown --dist " + name);
}

cmin::LevySpec parse_process(const std::string& name, double alpha)
{
    if (name == "brownian")
        return cmin::LevySpec::brownian();
    if (name == "cauchy")
        return cmin::LevySpec::cauchy();
    if (name == "stable")
        return cmin::LevySpec::stable(alpha);
    throw cmin::ParameterError("unknown --process " + name);
}

cmin::Rational parse_rational(const std::string& text)
{
    try
    {
        return cmin::Rational(text);
    }
    catch (const std::exception&)
    {
        throw cmin::ParameterError("not a rational number: " + text);
    }
}

std::vector<cmin::Rational> parse_increments(const std::string& list)
{
    std::vector<cmin::Rational> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_rational(item));
    if (out.empty())
        throw cmin::ParameterError("--increments is empty");
    return out;
}

//! Smallest positive integers, taken greedily, with no subset-average ties.
std::vector<cmin::Rational> greedy_generic_integers(int n)
{
    std::vector<cmin::Rational> out;
    for (long k = 1; static_cast<int>(out.size()) < n; ++k)
    {
        out.emplace_back(k);
        if (!cmin::check_no_ties(out))
            out.pop_back();
    }
    return out;
}

std::string key_of(const std::vector<int>& parts)
{
    std::string s = "[";
    for (std::size_t i = 0; i < parts.size(); ++i)
        s += (i ? "," : "") + std::to_string(parts[i]);
    return s + "]";
}

json face_rows(const cmin::Minorant<double>& m)
{
    json rows = json::array();
    for (std::size_t i = 0; i < m.faces.size(); ++i)
    {
        const auto& f = m.faces[i];
        rows.push_back({{"face_index", i},
                        {"left_time", f.left_time},
                        {"right_time", f.right_time},
                        {"length", f.length},
                        {"increment", f.increment},
                        {"slope", f.slope}});
    }
    return rows;
}

json point_rows(const cmin::FacePointSet& set)
{
    json rows = json::array();
    for (const auto& p : set.points)
        rows.push_back({{"length", p.length}, {"increment", p.increment}, {"slope", p.slope()}});
    return rows;
}

json truncation_json(const cmin::Truncation& t)
{
    return {{"min_length", t.min_length}, {"missing_mass_bound", t.missing_mass_bound}, {"max_length", t.max_length}};
}

struct SimulateOptions
{
    std::string target;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string meta;
    std::string format{"csv"};
    std::string dist{"normal"};
    std::string process{"brownian"};
    double p1{0.0};
    double p2{1.0};
    double alpha{1.5};
    long n{100};
    double q{0.5};
    double theta{1.0};
    double tol{1e-4};
    double min_length{1e-4};
    long max_length{5};
    double t{1.0};
    long grid_n{1L << 14};
};

int run_simulate(const SimulateOptions& o)
{
    const std::uint64_t seed = o.seed ? *o.seed : std::random_device{}() * 0x100000000ULL + std::random_device{}();
    cmin::RngStream rng(seed);

    json envelope{{"target", o.target}, {"seed", seed}};
    json params = json::object();
    std::optional<cmin::Minorant<double>> faces;
    std::optional<cmin::FacePointSet> points;

    if (o.target == "walk-minorant")
    {
        const auto spec = parse_dist(o.dist, o.p1, o.p2, o.alpha);
        if (o.n < 1)
            throw cmin::ParameterError("--n must be >= 1");
        faces = cmin::minorant_of(cmin::sample_walk(spec, o.n, rng));
        params = {{"dist", o.dist}, {"p1", spec.p1}, {"p2", spec.p2}, {"n", o.n}};
        envelope["truncation"] = nullptr;
    }
    else if (o.target == "levy-minorant")
    {
        const auto spec = parse_process(o.process, o.alpha);
        const auto lm = cmin::build_levy_minorant_01(spec, o.tol, rng);
        faces = lm.minorant;
        params = {{"process", o.process}, {"alpha", spec.alpha}, {"tol", o.tol}};
        envelope["truncation"] = {{"remainder", lm.sticks.remainder}, {"sticks", lm.sticks.pieces.size()}};
    }
    else if (o.target == "geometric-ppp")
    {
        const auto spec = parse_dist(o.dist, o.p1, o.p2, o.alpha);
        points = cmin::sample_ppp_geometric(spec, o.q, rng);
        params = {{"dist", o.dist}, {"p1", spec.p1}, {"p2", spec.p2}, {"q", o.q}};
    }
    else if (o.target == "exp-levy-ppp")
    {
        const auto spec = parse_process(o.process, o.alpha);
        points = cmin::sample_ppp_exp_levy(spec, o.theta, o.min_length, rng);
        params = {{"process", o.process}, {"alpha", spec.alpha}, {"theta", o.theta}, {"min_length", o.min_length}};
    }
    else if (o.target == "infinite-walk-ppp")
    {
        const auto spec = parse_dist(o.dist, o.p1, o.p2, o.alpha);
        points = cmin::sample_ppp_infinite_walk(spec, o.max_length, rng);
        params = {{"dist", o.dist}, {"p1", spec.p1}, {"p2", spec.p2}, {"max_length", o.max_length}};
    }
    else if (o.target == "meander-taurho")
    {
        const auto seq = cmin::tau_rho_adaptive(o.t, rng, o.tol);
        faces = cmin::minorant_from_tau_rho(seq, true);
        params = {{"t", o.t}, {"tol", o.tol}, {"rho0", seq.rhos.front()}};
        envelope["truncation"] = {{"last_tau", seq.taus.back()}, {"steps", seq.taus.size() - 1}};
    }
    else if (o.target == "meander-grid")
    {
        const auto path = cmin::simulate_meander_grid(o.grid_n, rng);
        faces = cmin::lower_hull(path.times, path.values);
        params = {{"grid_n", o.grid_n}, {"segment_steps", path.times.size() - 1}};
        envelope["truncation"] = nullptr;
    }
    else
    {
        throw cmin::ParameterError("unknown simulate target " + o.target);
    }
    if (points)
        envelope["truncation"] = truncation_json(points->truncation);
    envelope["params"] = params;

    std::ostringstream csv;
    if (faces)
    {
        envelope["rows"] = faces->faces.size();
        cmin::write_face_csv(csv, *faces);
    }
    else
    {
        envelope["rows"] = points->points.size();
        cmin::write_point_csv(csv, *points);
    }

    if (o.format == "json")
    {
        envelope["data"] = faces ? face_rows(*faces) : point_rows(*points);
        write_text(o.out, envelope.dump(2) + "\n");
    }
    else
    {
        write_text(o.out, csv.str());
        if (!o.meta.empty())
            write_text(o.meta, envelope.dump(2) + "\n");
        else
            std::cerr << envelope.dump() << "\n";
    }
    return exit_ok;
}

int run_verify(const std::string& name, const cmin::SuiteConfig& cfg, const std::string& out)
{
    const auto* suite = cmin::find_suite(name);
    if (!suite)
    {
        std::cerr << "unknown suite '" << name << "'; available:";
        for (const auto& s : cmin::registered_suites())
            std::cerr << " " << s.name;
        std::cerr << "\n";
        return exit_usage;
    }
    const auto reports = suite->run(cfg);
    write_text(out, cmin::to_json(reports).dump(2) + "\n");
    bool ok = true;
    for (const auto& r : reports)
        ok = ok && r.passed;
    return ok ? exit_ok : exit_fail;
}

int run_enumerate(const std::string& increments, std::optional<int> n, const std::string& out)
{
    std::vector<cmin::Rational> x;
    if (!increments.empty())
        x = parse_increments(increments);
    else if (n)
    {
        if (*n < 1 || *n > 8)
            throw cmin::ParameterError("--n must lie in 1..8");
        x = greedy_generic_integers(*n);
    }
    else
        throw cmin::ParameterError("enumerate needs --increments or --n");

    json inc = json::array();
    for (const auto& v : x)
        inc.push_back(v.str());
    try
    {
        const auto tally = cmin::enumerate_walk_laws(x);
        json partitions = json::object();
        for (const auto& [p, c] : tally.partitions)
            partitions[key_of(p)] = c;
        json compositions = json::object();
        for (const auto& [c, k] : tally.compositions)
            compositions[key_of(c)] = k;
        json expected = json::object();
        for (const auto& [p, prob] : cmin::cycle_type_law(tally.n))
            expected[key_of(p)] = (prob * cmin::factorial(tally.n)).str();
        const json doc{{"increments", inc},
                       {"n", tally.n},
                       {"orderings", tally.orderings},
                       {"partitions", partitions},
                       {"expected_partitions", expected},
                       {"compositions", compositions},
                       {"matches_partition_law", tally.matches_partition_law}};
        write_text(out, doc.dump(2) + "\n");
        return tally.matches_partition_law ? exit_ok : exit_fail;
    }
    catch (const cmin::TieError& e)
    {
        std::cerr << "tie: " << e.what() << "\n";
        write_text(out, json{{"increments", inc}, {"error", "tie"}, {"message", e.what()}}.dump(2) + "\n");
        return exit_fail;
    }
}

int run_report(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw IoError("cannot open " + path);
    json doc;
    try
    {
        is >> doc;
    }
    catch (const json::exception& e)
    {
        throw cmin::ParameterError(std::string("malformed report: ") + e.what());
    }
    if (!doc.is_array())
        throw cmin::ParameterError("report must be a JSON array of test results");
    bool ok = true;
    for (const auto& r : doc)
    {
        const bool passed = r.value("passed", false);
        ok = ok && passed;
        std::string p = "-";
        if (r.contains("p_value") && r["p_value"].is_number())
            p = std::to_string(r["p_value"].get<double>());
        std::printf("%-4s %-40s stat=%-14.6g p=%-10s n=%ld\n", passed ? "ok" : "FAIL",
                    r.value("test", std::string("?")).c_str(), r.value("statistic", 0.0), p.c_str(),
                    r.value("n", 0L));
    }
    std::printf("%zu results, %s\n", doc.size(), ok ? "all passed" : "failures present");
    return ok ? exit_ok : exit_fail;
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Convex minorants of random walks and Levy processes"};
    app.require_subcommand(1);
    app.fallthrough();
    int workers = 1;
    app.add_option("--workers", workers, "Worker threads for replica generation")->check(CLI::PositiveNumber);

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate one object and export its faces or points");
    simulate->add_option("target", sim.target, "walk-minorant | levy-minorant | geometric-ppp | exp-levy-ppp | "
                                                "infinite-walk-ppp | meander-taurho | meander-grid")
        ->required();
    simulate->add_option("--seed", sim.seed, "Master seed (generated and echoed when absent)");
    simulate->add_option("--out", sim.out, "Output path (default stdout)");
    simulate->add_option("--meta", sim.meta, "JSON envelope path for csv output (default stderr)");
    simulate->add_option("--format", sim.format)->check(CLI::IsMember({"csv", "json"}));
    simulate->add_option("--dist", sim.dist, "normal | cauchy | stable | uniform | exponential");
    simulate->add_option("--process", sim.process, "brownian | cauchy | stable");
    simulate->add_option("--p1", sim.p1, "Location (normal, cauchy) or lower end (uniform)");
    simulate->add_option("--p2", sim.p2, "Scale, upper end or rate");
    simulate->add_option("--alpha", sim.alpha, "Stability index");
    simulate->add_option("--n", sim.n, "Walk length");
    simulate->add_option("--q", sim.q, "Geometric horizon parameter");
    simulate->add_option("--theta", sim.theta, "Exponential horizon rate");
    simulate->add_option("--tol", sim.tol, "Stick remainder / tau tolerance");
    simulate->add_option("--min-length", sim.min_length, "Shortest generated face");
    simulate->add_option("--max-length", sim.max_length, "Longest generated face (infinite walk)");
    simulate->add_option("--t", sim.t, "Meander length");
    simulate->add_option("--grid-n", sim.grid_n, "Grid steps for meander-grid");

    std::string suite_name;
    std::string verify_out;
    cmin::SuiteConfig cfg;
    bool list_suites = false;
    auto* verify = app.add_subcommand("verify", "Run a verification suite and write a JSON report array");
    verify->add_option("--suite", suite_name, "Suite name");
    verify->add_flag("--list", list_suites, "List suites");
    verify->add_option("--seed", cfg.seed, "Master seed");
    verify->add_option("--samples", cfg.samples, "Override replica count");
    verify->add_option("--q", cfg.q, "Override q");
    verify->add_option("--level", cfg.level, "Test level");
    verify->add_option("--out", verify_out, "Output path (default stdout)");

    std::string increments;
    std::optional<int> enum_n;
    std::string enum_out;
    auto* enumerate = app.add_subcommand("enumerate", "Exact face-length tallies over all orderings");
    auto* inc_opt = enumerate->add_option("--increments", increments, "Comma-separated rationals, e.g. 1,-2/3,4");
    enumerate->add_option("--n", enum_n, "Use the n smallest tie-free positive integers")->excludes(inc_opt);
    enumerate->add_option("--out", enum_out, "Output path (default stdout)");

    std::string report_in;
    auto* report = app.add_subcommand("report", "Summarise a JSON report array");
    report->add_option("--in", report_in, "Report file")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try
    {
        if (*simulate)
            return run_simulate(sim);
        if (*verify)
        {
            if (list_suites)
            {
                for (const auto& s : cmin::registered_suites())
                    std::cout << s.name << "\t" << s.description << "\n";
                return exit_ok;
            }
            cfg.workers = workers;
            return run_verify(suite_name, cfg, verify_out);
        }
        if (*enumerate)
            return run_enumerate(increments, enum_n, enum_out);
        return run_report(report_in);
    }
    catch (const IoError& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    }
    catch (const cmin::TieError& e)
    {
        std::cerr << "tie: " << e.what() << "\n";
        return exit_fail;
    }
    catch (const cmin::Error& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
}
