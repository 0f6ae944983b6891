// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#include "spsatune/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <thread>

#include "spsatune/error.hpp"

extern char** environ;

namespace spsatune {

namespace {

std::vector<std::string> split_arguments(const std::string& tmpl) {
  std::vector<std::string> args;
  std::string cur;
  bool in_token = false, in_quote = false;
  for (char c : tmpl) {
    if (in_quote) {
      if (c == '\'') in_quote = false;
      else cur += c;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (in_token) args.push_back(std::move(cur));
      cur.clear();
      in_token = false;
    } else if (c == '\'') {
      in_quote = true;
      in_token = true;
    } else {
      cur += c;
      in_token = true;
    }
  }
  if (in_quote) throw TemplateError("unbalanced single quote in command template");
  if (in_token) args.push_back(std::move(cur));
  return args;
}

// Calls on_text / on_placeholder for the pieces of one argument.
template <typename Text, typename Placeholder>
void scan_placeholders(const std::string& s, Text on_text, Placeholder on_placeholder) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t open = s.find('{', pos);
    std::size_t stray = s.find('}', pos);
    if (stray < open) throw TemplateError("unmatched '}' in command template");
    if (open == std::string::npos) {
      on_text(s.substr(pos));
      return;
    }
    std::size_t close = s.find('}', open);
    if (close == std::string::npos) throw TemplateError("unterminated placeholder in '" + s + "'");
    on_text(s.substr(pos, open - pos));
    std::string name = s.substr(open + 1, close - open - 1);
    if (name.empty()) throw TemplateError("empty placeholder {} in command template");
    on_placeholder(name);
    pos = close + 1;
  }
}

std::vector<std::string> build_environment(
    const std::vector<std::pair<std::string, std::string>>& extra) {
  std::vector<std::string> env;
  for (char** e = environ; e && *e; ++e) {
    std::string entry(*e);
    std::string key = entry.substr(0, entry.find('='));
    bool overridden = false;
    for (const auto& [k, v] : extra)
      if (k == key) overridden = true;
    if (!overridden) env.push_back(std::move(entry));
  }
  for (const auto& [k, v] : extra) env.push_back(k + "=" + v);
  return env;
}

}  // namespace

std::vector<std::string> template_placeholders(const std::string& tmpl) {
  std::vector<std::string> names;
  for (const auto& arg : split_arguments(tmpl))
    scan_placeholders(arg, [](const std::string&) {},
                      [&](const std::string& name) { names.push_back(name); });
  return names;
}

std::vector<std::string> render_command(const std::string& tmpl, const SystemConfig& config,
                                        const ParameterSpace& space) {
  if (config.size() != space.size()) throw StructuralError("config dimension mismatch");
  std::vector<std::string> out;
  for (const auto& arg : split_arguments(tmpl)) {
    std::string rendered;
    scan_placeholders(
        arg, [&](const std::string& text) { rendered += text; },
        [&](const std::string& name) {
          auto idx = space.index_of(name);
          if (!idx) throw TemplateError("unknown placeholder {" + name + "}");
          rendered += render_value(config.values[*idx], space[*idx]);
        });
    out.push_back(std::move(rendered));
  }
  return out;
}

std::string param_env_name(const std::string& param_name) {
  std::string out = "SPSA_PARAM_";
  for (char c : param_name)
    out += std::isalnum(static_cast<unsigned char>(c))
               ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
               : '_';
  return out;
}

ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::vector<std::pair<std::string, std::string>>& extra_env,
                          double timeout_seconds) {
  using Clock = std::chrono::steady_clock;
  ProcessResult result;
  if (argv.empty()) {
    result.launch_failed = true;
    result.error = "empty command";
    return result;
  }

  int fds[2];
  if (pipe(fds) != 0) {
    result.launch_failed = true;
    result.error = std::string("pipe: ") + std::strerror(errno);
    return result;
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
  posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, fds[0]);
  posix_spawn_file_actions_addclose(&actions, fds[1]);
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);

  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);
  auto env = build_environment(extra_env);
  std::vector<char*> cenv;
  for (auto& e : env) cenv.push_back(e.data());
  cenv.push_back(nullptr);

  const auto start = Clock::now();
  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(timeout_seconds));
  pid_t pid = -1;
  int rc = posix_spawnp(&pid, argv[0].c_str(), &actions, &attr, cargv.data(), cenv.data());
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  close(fds[1]);
  if (rc != 0) {
    close(fds[0]);
    result.launch_failed = true;
    result.error = "cannot launch '" + argv[0] + "': " + std::strerror(rc);
    return result;
  }
  fcntl(fds[0], F_SETFL, fcntl(fds[0], F_GETFL) | O_NONBLOCK);

  auto drain = [&](bool& eof) {
    char buf[4096];
    for (;;) {
      ssize_t n = read(fds[0], buf, sizeof buf);
      if (n > 0) {
        result.stdout_text.append(buf, static_cast<std::size_t>(n));
      } else {
        if (n == 0) eof = true;
        if (n < 0 && errno == EINTR) continue;
        return;
      }
    }
  };

  bool eof = false;
  int status = 0;
  for (;;) {
    auto now = Clock::now();
    if (now >= deadline) {
      kill(-pid, SIGKILL);
      waitpid(pid, &status, 0);
      result.timed_out = true;
      break;
    }
    if (!eof) {
      auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
      pollfd pfd{fds[0], POLLIN, 0};
      int timeout_ms = static_cast<int>(std::clamp<long long>(remaining, 1, 50));
      if (poll(&pfd, 1, timeout_ms) > 0) drain(eof);
    } else {
      std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
    pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) {
      drain(eof);
      break;
    }
  }
  result.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  close(fds[0]);

  if (!result.timed_out) {
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status)) result.exit_code = 128 + WTERMSIG(status);
  }
  return result;
}

std::optional<double> parse_last_line_value(const std::string& text) {
  std::size_t end = text.size();
  while (end > 0) {
    std::size_t begin = text.rfind('\n', end - 1);
    begin = begin == std::string::npos ? 0 : begin + 1;
    std::string line = text.substr(begin, end - begin);
    auto first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos) {
      auto last = line.find_last_not_of(" \t\r");
      line = line.substr(first, last - first + 1);
      char* stop = nullptr;
      errno = 0;
      double v = std::strtod(line.c_str(), &stop);
      if (stop == line.c_str() || *stop != '\0' || errno == ERANGE || !std::isfinite(v))
        return std::nullopt;
      return v;
    }
    if (begin == 0) break;
    end = begin - 1;
  }
  return std::nullopt;
}

ProcessObjective::ProcessObjective(ObjectiveSpec spec, ParameterSpace space)
    : spec_(std::move(spec)), space_(std::move(space)) {
  spec_.validate(space_);
}

ObjectiveSample ProcessObjective::evaluate(const SystemConfig& config, Rng& /*rng*/) {
  ObjectiveSample sample;
  sample.config = config;
  auto argv = render_command(spec_.command_template, config, space_);
  std::vector<std::pair<std::string, std::string>> env;
  if (spec_.export_env)
    for (std::size_t i = 0; i < space_.size(); ++i)
      env.emplace_back(param_env_name(space_[i].name), render_value(config.values[i], space_[i]));

  ++launches_;
  ProcessResult r = run_process(argv, env, spec_.timeout_seconds);
  sample.duration = r.wall_seconds;
  if (r.launch_failed) {
    sample.status = SampleStatus::failed;
    sample.diagnostic = r.error;
  } else if (r.timed_out) {
    sample.status = SampleStatus::timeout;
    sample.diagnostic = "exceeded timeout of " + std::to_string(spec_.timeout_seconds) + " s";
  } else if (r.exit_code != 0) {
    sample.status = SampleStatus::failed;
    sample.diagnostic = "exit status " + std::to_string(r.exit_code);
  } else if (spec_.value_source == ValueSource::wall_clock_seconds) {
    sample.value = shape_value(spec_, r.wall_seconds);
  } else if (auto v = parse_last_line_value(r.stdout_text)) {
    sample.value = shape_value(spec_, *v);
  } else {
    sample.status = SampleStatus::failed;
    sample.diagnostic = "last stdout line is not a finite number";
  }
  return sample;
}

}  // namespace spsatune
