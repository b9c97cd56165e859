#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "trp/cnf.hpp"
#include "trp/encode.hpp"
#include "trp/record.hpp"

namespace trp {

struct SolverResult {
    Outcome outcome = Outcome::error;
    Model model;  // 1-based; empty unless outcome == sat
    double wall_seconds = 0.0;
    int exit_code = -1;
    std::string output_tail;  // for diagnosing errors
};

namespace detail {

[[nodiscard]] inline bool is_executable(const std::string& path) {
    return ::access(path.c_str(), X_OK) == 0 &&
           std::filesystem::is_regular_file(std::filesystem::status(path));
}

[[nodiscard]] inline bool find_in_path(const std::string& name) {
    if (name.find('/') != std::string::npos)
        return is_executable(name);
    const char* path = std::getenv("PATH");
    if (!path)
        return false;
    std::stringstream ss(path);
    std::string dir;
    while (std::getline(ss, dir, ':'))
        if (!dir.empty() && is_executable(dir + "/" + name))
            return true;
    return false;
}

[[nodiscard]] inline std::string replace_all(std::string s, const std::string& from,
                                             const std::string& to) {
    for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
        s.replace(pos, from.size(), to);
    return s;
}

/// Drop ANSI escape sequences (CSI and OSC) and lone ESC bytes; some
/// solvers decorate their banner with cursor-control codes.
[[nodiscard]] inline std::string strip_ansi(const std::string& in) {
    std::string out;
    out.reserve(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (in[i] != '\x1b') {
            out.push_back(in[i]);
            continue;
        }
        if (i + 1 < in.size() && in[i + 1] == '[') {
            i += 2;
            while (i < in.size() && (in[i] < 0x40 || in[i] > 0x7e))
                ++i;
        } else if (i + 1 < in.size() && in[i + 1] == ']') {
            i += 2;
            while (i < in.size() && in[i] != '\x07' && in[i] != '\x1b')
                ++i;
            if (i + 1 < in.size() && in[i] == '\x1b' && in[i + 1] == '\\')
                ++i;
        }
    }
    return out;
}

[[nodiscard]] inline std::vector<std::string> split_tokens(const std::string& s) {
    std::stringstream ss(s);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok)
        out.push_back(tok);
    return out;
}

}  // namespace detail

/// Pick a solver command template.  TRPTOOL_SOLVER wins; otherwise scan
/// PATH for known solvers.  Templates may use {cnf} and {seed}; tokens
/// split on whitespace (no shell, no quoting).
[[nodiscard]] inline std::string discover_solver() {
    if (const char* env = std::getenv("TRPTOOL_SOLVER"); env && *env) {
        std::string cmd = env;
        if (cmd.find("{cnf}") == std::string::npos)
            cmd += " {cnf}";
        return cmd;
    }
    if (detail::find_in_path("kissat"))
        return "kissat -q --seed={seed} {cnf}";
    if (detail::find_in_path("cadical"))
        return "cadical -q {cnf}";
    if (detail::find_in_path("splr"))
        return "splr -q -r - {cnf}";
    throw std::runtime_error("no SAT solver on PATH; set TRPTOOL_SOLVER");
}

/// Run one solver process on a DIMACS file and interpret its output.
/// The "s" line is authoritative; exit codes 10/20 are a fallback for
/// solvers that print no status line.  Timeouts kill the whole process
/// group and are charged the full budget.  The child runs in the CNF
/// file's directory so solvers that drop scratch files litter there.
[[nodiscard]] inline SolverResult run_solver(const std::string& command_template,
                                             const std::string& cnf_path, std::uint64_t seed,
                                             double timeout_seconds, int expected_vars) {
    namespace fs = std::filesystem;
    const fs::path cnf_abs = fs::absolute(cnf_path);
    // a template without {cnf} could never see the instance; treat it like
    // a bare command and hand the file over as the last argument
    std::string with_cnf = command_template;
    if (with_cnf.find("{cnf}") == std::string::npos)
        with_cnf += " {cnf}";
    std::string cmd = detail::replace_all(with_cnf, "{cnf}", cnf_abs.string());
    cmd = detail::replace_all(cmd, "{seed}", std::to_string(seed));
    const std::vector<std::string> tokens = detail::split_tokens(cmd);
    if (tokens.empty())
        throw std::invalid_argument("empty solver command");

    int pipefd[2];
    if (::pipe(pipefd) != 0)
        throw std::runtime_error("pipe failed");

    const auto start = std::chrono::steady_clock::now();
    const pid_t pid = ::fork();
    if (pid < 0) {
        ::close(pipefd[0]);
        ::close(pipefd[1]);
        throw std::runtime_error("fork failed");
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        ::dup2(pipefd[1], STDOUT_FILENO);
        ::dup2(pipefd[1], STDERR_FILENO);
        ::close(pipefd[0]);
        ::close(pipefd[1]);
        if (::chdir(cnf_abs.parent_path().c_str()) != 0) {
            // keep going; worst case scratch files land in the old cwd
        }
        std::vector<char*> argv;
        argv.reserve(tokens.size() + 1);
        for (const std::string& t : tokens)
            argv.push_back(const_cast<char*>(t.c_str()));
        argv.push_back(nullptr);
        ::execvp(argv[0], argv.data());
        ::_exit(127);
    }
    ::setpgid(pid, pid);  // mirror the child's call so the kill below can't race it
    ::close(pipefd[1]);

    constexpr std::size_t output_cap = 64u << 20;
    std::string output;
    bool truncated = false;
    bool timed_out = false;
    const auto deadline =
        start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(timeout_seconds));
    char buf[1 << 16];
    for (;;) {
        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            timed_out = true;
            break;
        }
        const auto remaining =
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
        struct pollfd pfd {
            pipefd[0], POLLIN, 0
        };
        const int pr = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(remaining + 1, 200)));
        if (pr < 0) {
            if (errno == EINTR)
                continue;
            break;
        }
        if (pr == 0)
            continue;
        const ssize_t k = ::read(pipefd[0], buf, sizeof buf);
        if (k > 0) {
            if (output.size() < output_cap)
                output.append(buf, static_cast<std::size_t>(std::min<ssize_t>(
                                       k, static_cast<ssize_t>(output_cap - output.size()))));
            else
                truncated = true;
        } else if (k == 0) {
            break;  // child closed its end
        } else if (errno != EINTR) {
            break;
        }
    }
    ::close(pipefd[0]);

    SolverResult r;
    if (timed_out) {
        ::kill(-pid, SIGKILL);
        ::kill(pid, SIGKILL);
        ::waitpid(pid, nullptr, 0);
        r.outcome = Outcome::timeout;
        r.wall_seconds = timeout_seconds;
        return r;
    }
    int status = 0;
    ::waitpid(pid, &status, 0);
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (WIFEXITED(status))
        r.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
        r.exit_code = 128 + WTERMSIG(status);

    const std::string clean = detail::strip_ansi(output);
    std::string status_line;
    std::vector<Lit> lits;
    bool model_done = false;
    std::size_t line_start = 0;
    for (std::size_t i = 0; i <= clean.size(); ++i) {
        if (i != clean.size() && clean[i] != '\n' && clean[i] != '\r')
            continue;
        const std::string line = clean.substr(line_start, i - line_start);
        line_start = i + 1;
        if (line.rfind("s ", 0) == 0 && status_line.empty()) {
            status_line = line.substr(2);
            while (!status_line.empty() && std::isspace(static_cast<unsigned char>(status_line.back())))
                status_line.pop_back();
        } else if (line.rfind("v", 0) == 0 && !model_done &&
                   (line.size() == 1 || line[1] == ' ')) {
            std::stringstream ls(line.substr(1));
            Lit lit = 0;
            while (ls >> lit) {
                if (lit == 0) {
                    model_done = true;
                    break;
                }
                lits.push_back(lit);
            }
        }
    }

    const auto tail = [&](const std::string& s) {
        constexpr std::size_t keep = 2000;
        return s.size() <= keep ? s : "..." + s.substr(s.size() - keep);
    };

    // prefix match: some solvers decorate the status line ("s SATISFIABLE: file").
    // UNSATISFIABLE first, since SATISFIABLE is its suffix.
    if (status_line.rfind("UNSATISFIABLE", 0) == 0)
        r.outcome = Outcome::unsat;
    else if (status_line.rfind("SATISFIABLE", 0) == 0)
        r.outcome = Outcome::sat;
    else if (status_line.empty() && r.exit_code == 10)
        r.outcome = Outcome::sat;
    else if (status_line.empty() && r.exit_code == 20)
        r.outcome = Outcome::unsat;
    else {
        r.outcome = Outcome::error;
        r.output_tail = tail(truncated ? clean + "\n[output truncated]" : clean);
        return r;
    }

    if (r.outcome == Outcome::sat) {
        if (!model_done) {
            r.outcome = Outcome::error;
            r.output_tail = "satisfiable but no terminated v-lines\n" + tail(clean);
            return r;
        }
        r.model.assign(static_cast<std::size_t>(expected_vars) + 1, false);
        for (Lit lit : lits) {
            const int v = std::abs(lit);
            if (v <= expected_vars)
                r.model[static_cast<std::size_t>(v)] = lit > 0;
        }
    }
    return r;
}

/// Variable-renamed copy of a formula with clause and literal order
/// shuffled.  Gives deterministic solvers distinct search trajectories
/// when their command template has no {seed}.  Signs are untouched, so
/// a model maps back by table lookup.
struct ShuffledInstance {
    CnfFormula formula;
    std::vector<int> var_map;  // original variable v becomes var_map[v]
};

[[nodiscard]] inline ShuffledInstance shuffled_instance(const CnfFormula& f, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int n = f.variable_count();
    ShuffledInstance out;
    out.var_map.resize(static_cast<std::size_t>(n) + 1);
    std::iota(out.var_map.begin(), out.var_map.end(), 0);
    std::shuffle(out.var_map.begin() + 1, out.var_map.end(), rng);

    std::vector<std::size_t> order(f.clauses().size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    out.formula.ensure_variables(n);
    for (std::size_t idx : order) {
        Clause c = f.clauses()[idx];
        for (Lit& lit : c) {
            const int v = out.var_map[static_cast<std::size_t>(std::abs(lit))];
            lit = lit > 0 ? v : -v;
        }
        std::shuffle(c.begin(), c.end(), rng);
        out.formula.add_clause(std::move(c));
    }
    return out;
}

[[nodiscard]] inline Model unshuffle_model(const Model& shuffled, const std::vector<int>& var_map) {
    Model out(var_map.size(), false);
    for (std::size_t v = 1; v < var_map.size(); ++v)
        out[v] = shuffled.at(static_cast<std::size_t>(var_map[v]));
    return out;
}

}  // namespace trp
