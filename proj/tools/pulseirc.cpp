// pulseirc: compiles JSON pulse graphs and schedules to samples, DDS
// segments or DOT.
#include "pulseir/pulseir.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace pulseir;

namespace {

constexpr const char *kDefaultPasses = "substitute,fold,simplify,validate";

enum class Command { Render, Compile, Dot, Validate };
enum class Target { Samples, Dds };

struct Config {
    Command command = Command::Render;
    std::string input;
    std::vector<std::string> bindings;
    std::optional<std::string> passes;
    Target target = Target::Samples;
    double rate = 1e9;
    double t0 = 0.0;
    std::string out;
    std::string dot;
};

std::string csv(const SampleBlock &block)
{
    std::string text = "index,time_s,value\n";
    char line[96];
    for (std::size_t k = 0; k < block.values.size(); ++k) {
        std::snprintf(line, sizeof line, "%zu,%.12g,%.9g\n", k, block.time(k), block.values[k]);
        text += line;
    }
    return text;
}

// <stem>.<label>.<id><ext>, or <stem>.<id><ext> for unlabeled channels.
fs::path channel_path(const fs::path &base, const Channel &ch)
{
    std::string name = base.stem().string() + "." + ch.display_name() + base.extension().string();
    return base.parent_path() / name;
}

void write_file(const fs::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::InvalidArgument, "cannot write '" + path.string() + "'");
    out << text;
}

std::string describe(const DurationViolation &v)
{
    std::string where;
    for (const auto &label : v.path)
        where += (where.empty() ? "" : "/") + label;
    return std::string(v.node->name()) + " at " + (where.empty() ? "<root>" : where) +
           " has negative duration " + format_number(v.duration) + " s";
}

class Driver {
public:
    explicit Driver(const Config &cfg) : cfg_(cfg) {}

    int run()
    {
        Bindings bindings;
        for (const auto &b : cfg_.bindings) {
            auto [key, value] = parse_binding(b);
            bindings.insert_or_assign(key, value);
        }
        std::string passes = cfg_.passes ? *cfg_.passes : (cfg_.command == Command::Dot ? "" : kDefaultPasses);
        pipeline_ = parse_pipeline(passes, bindings);

        Document doc = load_document(cfg_.input);
        if (!doc.is_schedule()) {
            auto out = process(nullptr, doc.graph);
            if (!out)
                return 1;
            emit(cfg_.out, *out);
            if (!cfg_.dot.empty())
                write_file(cfg_.dot, dot_);
            return status_;
        }

        // Channels run independently; outputs are written in channel order.
        auto results = pipeline_.run(*doc.schedule, true);
        std::string combined;
        for (const auto &r : results) {
            const Channel &ch = r.channel;
            if (!r.ok()) {
                report(*r.error);
                continue;
            }
            auto out = finish(&ch, *r.result);
            if (!out)
                continue;
            if (cfg_.out.empty()) {
                combined += "# channel " + ch.display_name() + "\n" + *out;
            } else {
                write_file(channel_path(cfg_.out, ch), *out);
            }
            if (!cfg_.dot.empty())
                write_file(channel_path(cfg_.dot, ch), dot_);
        }
        if (cfg_.out.empty())
            std::cout << combined;
        return status_;
    }

private:
    std::optional<std::string> process(const Channel *ch, const NodePtr &graph)
    {
        try {
            return finish(ch, pipeline_.run(graph));
        } catch (Error &e) {
            if (ch)
                e.set_channel(ch->display_name());
            report(e);
            return std::nullopt;
        }
    }

    std::optional<std::string> finish(const Channel *ch, const PassResult &result)
    {
        try {
            return lower(ch, result);
        } catch (Error &e) {
            if (ch)
                e.set_channel(ch->display_name());
            report(e);
            return std::nullopt;
        }
    }

    std::optional<std::string> lower(const Channel *ch, const PassResult &result)
    {
        dot_ = to_dot(result.graph);
        std::size_t violations = 0;
        for (std::size_t i = 0; i < result.passes.size(); ++i) {
            const auto *v = dynamic_cast<const ValidatePass *>(result.passes[i].get());
            if (!v)
                continue;
            for (const auto &violation : v->violations()) {
                std::cerr << "violation: [pass " << i << " (validate)]";
                if (ch)
                    std::cerr << " [channel " << ch->display_name() << "]";
                std::cerr << " " << describe(violation) << "\n";
                ++violations;
            }
        }
        if (violations > 0) {
            status_ = 1;
            return std::nullopt;
        }

        switch (cfg_.command) {
        case Command::Validate:
            return std::string("ok\n");
        case Command::Dot:
            return dot_;
        case Command::Render:
        case Command::Compile:
            break;
        }
        Waveform w(result.graph);
        if (cfg_.target == Target::Dds)
            return dds_to_json(munch_dds(w, cfg_.t0));
        return csv(emit_samples(w, cfg_.rate, cfg_.t0));
    }

    void emit(const std::string &path, const std::string &text)
    {
        if (path.empty())
            std::cout << text;
        else
            write_file(path, text);
    }

    void report(const Error &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        status_ = 1;
    }

    const Config &cfg_;
    Pipeline pipeline_;
    std::string dot_;
    int status_ = 0;
};

void add_common(CLI::App *sub, Config &cfg, const char *default_passes = kDefaultPasses)
{
    sub->add_option("input", cfg.input, "JSON graph or schedule")->required()->check(CLI::ExistingFile);
    sub->add_option("--bind", cfg.bindings, "Variable binding key=value (repeatable)");
    std::string passes_help = *default_passes ? std::string("default: ") + default_passes : "default: none";
    sub->add_option("--passes", cfg.passes, "Comma-separated pass list (" + passes_help + ")");
    sub->add_option("--t0", cfg.t0, "Start time in seconds");
    sub->add_option("--out", cfg.out, "Output file (per channel for schedules); stdout if omitted");
    sub->add_option("--dot", cfg.dot, "Also write the compiled graph as DOT to this path");
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"pulseirc: pulse graph compiler", "pulseirc"};
    app.require_subcommand(0, 1);
    app.set_version_flag("--version", "pulseirc 0.1.0 (schema version " + std::to_string(kSchemaVersion) + ")");

    Config cfg;
    std::map<std::string, Target> targets{{"samples", Target::Samples}, {"dds", Target::Dds}};

    auto *render = app.add_subcommand("render", "Render samples as CSV");
    add_common(render, cfg);
    render->add_option("--rate", cfg.rate, "Sample rate in Hz")->check(CLI::PositiveNumber);

    auto *compile = app.add_subcommand("compile", "Compile to a target");
    add_common(compile, cfg);
    compile->add_option("--rate", cfg.rate, "Sample rate in Hz (samples target)")->check(CLI::PositiveNumber);
    compile->add_option("--target", cfg.target, "samples or dds")
        ->required()
        ->transform(CLI::CheckedTransformer(targets, CLI::ignore_case));

    auto *dot = app.add_subcommand("dot", "Write the graph as Graphviz DOT");
    add_common(dot, cfg, "");

    auto *validate = app.add_subcommand("validate", "Report scheduling violations");
    add_common(validate, cfg);

    CLI11_PARSE(app, argc, argv);

    if (render->parsed())
        cfg.command = Command::Render;
    else if (compile->parsed())
        cfg.command = Command::Compile;
    else if (dot->parsed())
        cfg.command = Command::Dot;
    else if (validate->parsed())
        cfg.command = Command::Validate;
    else {
        std::cerr << app.help();
        return 2;
    }

    try {
        Driver driver(cfg);
        return driver.run();
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
