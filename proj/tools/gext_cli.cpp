#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gext/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Group extensions of shifts of finite type: invariants, certificates and constructions"};
    std::string command, input, json_out;
    unsigned long seed = 1;
    std::string budget = "10000000";
    double tol = 1e-6;
    bool list = false;
    app.add_option("command", command, "operation to run");
    app.add_option("--input", input, "input document (text or JSON); '-' reads stdin");
    app.add_option("--seed", seed, "seed for randomized checks");
    app.add_option("--budget", budget, "cap on oracle enumeration size");
    app.add_option("--tol", tol, "tolerance for numeric checks");
    app.add_option("--json", json_out, "also write the report to this file");
    app.add_flag("--list", list, "list commands");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (list) {
        for (const auto& c : gext::command_names()) std::cout << c << "\n";
        return 0;
    }
    if (command.empty()) {
        std::cerr << "missing command; see --list\n";
        return 2;
    }

    gext::RunOptions opt;
    opt.seed = seed;
    opt.tol = tol;
    gext::CommandResult res;
    try {
        opt.budget = gext::Integer(budget);
        std::string text;
        if (input.empty() || input == "-") {
            std::ostringstream ss;
            ss << std::cin.rdbuf();
            text = ss.str();
        } else {
            std::ifstream f(input);
            if (!f) throw gext::InvalidArgument("cannot read input file '" + input + "'");
            std::ostringstream ss;
            ss << f.rdbuf();
            text = ss.str();
        }
        res = gext::run_command(command, gext::parse_input(text), opt);
    } catch (const std::exception& e) {
        res.canonical = gext::Json{{"command", command}, {"error", e.what()}};
        res.exit_code = 2;
    }
    const std::string out = res.report().dump(2);
    std::cout << out << "\n";
    if (!json_out.empty()) {
        std::ofstream f(json_out);
        if (!f) {
            std::cerr << "cannot write " << json_out << "\n";
            return 2;
        }
        f << out << "\n";
    }
    return res.exit_code;
}
