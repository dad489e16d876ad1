#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "modeinv/cavity.hpp"
#include "modeinv/errors.hpp"
#include "modeinv/sweep.hpp"
#include "modeinv/table.hpp"
#include "modeinv/validate.hpp"

namespace {

std::string timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

void print_setup_warnings(const modeinv::sweep::SweepSpec& spec)
{
    modeinv::CavitySetup s;
    s.L = spec.L;
    s.beta = spec.beta;
    s.resonant = spec.resonant;
    s.Omega = spec.Omega;
    s.v = modeinv::convert_speed(spec.v_si);
    s.lambda = spec.lambda;
    for (const auto& w : s.warnings())
        std::cerr << "warning: " << w << "\n";
}

void emit(const modeinv::SweepTable& table, const std::string& path, bool svg,
          const modeinv::SvgOptions& svg_opt)
{
    modeinv::SweepTable stamped = table;
    stamped.metadata.emplace_back("generated_at", timestamp());
    if (path.empty()) {
        modeinv::write_csv(stamped, std::cout);
        return;
    }
    if (const auto dir = std::filesystem::path(path).parent_path(); !dir.empty())
        std::filesystem::create_directories(dir);
    std::ofstream out(path);
    if (!out)
        throw modeinv::ConfigError("cannot write '" + path + "'");
    modeinv::write_csv(stamped, out);
    std::cerr << "wrote " << path << "\n";
    if (svg) {
        const std::string svg_path = path + ".svg";
        std::ofstream sout(svg_path);
        modeinv::write_svg(stamped, sout, svg_opt);
        std::cerr << "wrote " << svg_path << "\n";
    }
}

modeinv::SvgOptions svg_options_for(const modeinv::sweep::SweepSpec& spec)
{
    modeinv::SvgOptions o;
    o.log_x = spec.scale == "log";
    o.log_y = spec.observable == "stability";
    return o;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"mode-invisibility cavity probe calculations"};
    app.require_subcommand(1);

    std::string spec_path, out_override;
    bool svg_flag = false;
    auto* sweep_cmd = app.add_subcommand("sweep", "run a sweep described by a spec file");
    sweep_cmd->add_option("specfile", spec_path, "key = value sweep description")->required();
    sweep_cmd->add_option("--out", out_override, "override the output path");
    sweep_cmd->add_flag("--svg", svg_flag, "also write an SVG plot");

    std::string preset;
    auto* validate_cmd = app.add_subcommand("validate", "run a validation preset");
    validate_cmd->add_option("preset", preset, "quick | reductions | scaling")->required();

    std::string recipe_name, recipe_dir = ".";
    bool list_recipes = false;
    auto* recipe_cmd = app.add_subcommand("recipe", "run a built-in figure recipe");
    recipe_cmd->add_option("name", recipe_name, "recipe name (see --list)");
    recipe_cmd->add_option("--out", recipe_dir, "output directory");
    recipe_cmd->add_flag("--list", list_recipes, "list recipe names");

    double v_si = 0.0;
    auto* units_cmd = app.add_subcommand("units", "convert a speed in m/s to natural units");
    units_cmd->add_option("v_m_per_s", v_si, "speed in m/s")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sweep_cmd->parsed()) {
            modeinv::sweep::SweepSpec spec = modeinv::sweep::parse_spec_file(spec_path);
            if (!out_override.empty())
                spec.output = out_override;
            if (svg_flag)
                spec.svg = true;
            print_setup_warnings(spec);
            const modeinv::SweepTable table = modeinv::sweep::run_sweep(spec);
            emit(table, spec.output, spec.svg, svg_options_for(spec));
            return 0;
        }
        if (validate_cmd->parsed()) {
            const auto report = modeinv::validate::run_preset(preset);
            for (const auto& c : report.checks) {
                std::cout << (c.pass ? "PASS" : "FAIL") << "\t" << c.name << "\tmeasured="
                          << c.measured << "\tbound=" << c.bound;
                if (!c.note.empty())
                    std::cout << "\t" << c.note;
                std::cout << "\n";
            }
            std::cout << (report.all_pass() ? "ALL PASS" : "FAILURES PRESENT") << "\n";
            return report.all_pass() ? 0 : 1;
        }
        if (recipe_cmd->parsed()) {
            if (list_recipes) {
                for (const auto& n : modeinv::sweep::recipe_names())
                    std::cout << n << "\n";
                return 0;
            }
            if (recipe_name.empty())
                throw modeinv::ConfigError("recipe: name required (or --list)");
            const auto spec = modeinv::sweep::recipe_spec(recipe_name);
            print_setup_warnings(spec);
            const modeinv::SweepTable table = modeinv::sweep::run_recipe(recipe_name);
            const std::string path =
                (std::filesystem::path(recipe_dir) / (recipe_name + ".csv")).string();
            emit(table, path, true, svg_options_for(spec));
            return 0;
        }
        if (units_cmd->parsed()) {
            std::cout << modeinv::convert_speed(v_si) << "\n";
            return 0;
        }
    } catch (const modeinv::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const modeinv::RangeError& e) {
        std::cerr << "range error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
