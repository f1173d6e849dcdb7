#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sit/session.hpp"

namespace {

// Exit codes: 0 all good, 1 some query found no solutions, 2 errors.
enum ExitCode { Ok = 0, NoSolutions = 1, Failed = 2 };

int run_stream(sit::Session& session, std::istream& in, bool interactive) {
    bool any_error = false;
    bool any_empty_query = false;
    std::string line;

    auto prompt = [&](bool pending) {
        if (!interactive) return;
        if (pending)
            std::cout << "..> " << std::flush;
        else
            std::cout << (session.state().mode == sit::SessionState::Mode::Query ? "Q> " : "I> ")
                      << std::flush;
    };

    prompt(false);
    while (std::getline(in, line)) {
        sit::Session::StepResult result = session.repl_step(line);
        if (!result.output.empty()) std::cout << result.output << "\n";
        any_error |= result.error;
        any_empty_query |= result.was_query && result.solutions == 0 && !result.error;
        if (result.quit) break;
        prompt(result.pending);
    }
    if (any_error) return Failed;
    if (any_empty_query) return NoSolutions;
    return Ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sitkernel: an interpreter for situation-theoretic knowledge bases"};

    std::string kb_path;
    std::string batch_path;
    int depth = 32;
    int max_firings = 10000;
    app.add_option("--kb", kb_path, "knowledge base to load on startup");
    app.add_option("--batch", batch_path, "run statements from a file and exit");
    app.add_option("--depth", depth, "backward-chaining depth limit")->check(CLI::PositiveNumber);
    app.add_option("--max-firings", max_firings, "forward-chaining firing cap")
        ->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    sit::Session session;
    session.env().config().depth_limit = depth;
    session.env().config().max_firings = static_cast<std::size_t>(max_firings);

    if (!kb_path.empty()) {
        try {
            session.load_kb(kb_path);
        } catch (const sit::Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return Failed;
        }
    }

    if (!batch_path.empty()) {
        std::ifstream batch(batch_path);
        if (!batch) {
            std::cerr << "error: cannot open " << batch_path << "\n";
            return Failed;
        }
        return run_stream(session, batch, /*interactive=*/false);
    }

    return run_stream(session, std::cin, /*interactive=*/true);
}
