#include "cssmin/solver.hpp"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

extern char** environ;

namespace cssmin {

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string write_temp_file(const std::string& content, const std::string& suffix) {
  const char* dir = std::getenv("TMPDIR");
  std::string tmpl = std::string(dir && *dir ? dir : "/tmp") + "/cssmin-XXXXXX" + suffix;
  std::vector<char> buf(tmpl.begin(), tmpl.end());
  buf.push_back('\0');
  int fd = mkstemps(buf.data(), static_cast<int>(suffix.size()));
  if (fd < 0) throw std::runtime_error("cannot create temporary file");
  size_t off = 0;
  while (off < content.size()) {
    ssize_t w = ::write(fd, content.data() + off, content.size() - off);
    if (w <= 0) {
      ::close(fd);
      throw std::runtime_error("cannot write temporary file");
    }
    off += static_cast<size_t>(w);
  }
  ::close(fd);
  return buf.data();
}

ProcessResult run_process(const std::vector<std::string>& argv, double timeout_s, const std::atomic<bool>* cancel) {
  ProcessResult res;
  std::string out_path = write_temp_file("", ".out");
  posix_spawn_file_actions_t fa;
  posix_spawn_file_actions_init(&fa);
  posix_spawn_file_actions_addopen(&fa, 1, out_path.c_str(), O_WRONLY | O_TRUNC, 0600);
  posix_spawn_file_actions_addopen(&fa, 2, "/dev/null", O_WRONLY, 0);
  posix_spawn_file_actions_addopen(&fa, 0, "/dev/null", O_RDONLY, 0);
  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);
  pid_t pid;
  int rc = posix_spawnp(&pid, args[0], &fa, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&fa);
  if (rc != 0) {
    res.spawn_failed = true;
    std::remove(out_path.c_str());
    return res;
  }
  auto start = std::chrono::steady_clock::now();
  int status = 0;
  auto nap = std::chrono::microseconds(200);
  while (true) {
    pid_t w = waitpid(pid, &status, WNOHANG);
    if (w == pid) break;
    double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if ((timeout_s > 0 && el > timeout_s) || (cancel && cancel->load())) {
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      res.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(nap);
    if (nap < std::chrono::milliseconds(20)) nap *= 2;
  }
  if (!res.timed_out && WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
  std::ifstream in(out_path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  res.out = ss.str();
  std::remove(out_path.c_str());
  return res;
}

namespace {

std::mutex g_mu;
std::map<uint64_t, std::pair<std::string, SmtAnswer>> g_cache;
SolverStats g_stats;

void parse_model(const std::string& out, SmtAnswer& ans) {
  // (define-fun name () Int 5) / (- 5) / true / false
  size_t p = 0;
  while ((p = out.find("(define-fun ", p)) != std::string::npos) {
    p += 12;
    size_t e = out.find(' ', p);
    if (e == std::string::npos) break;
    std::string name = out.substr(p, e - p);
    if (name.size() > 1 && name.front() == '|') name = name.substr(1, name.size() - 2);
    size_t ty = out.find(')', e);
    if (ty == std::string::npos) break;
    size_t v = out.find_first_not_of(" \n\t", out.find(' ', ty + 2));
    if (v == std::string::npos) break;
    if (out.compare(v, 4, "true") == 0) {
      ans.model[name] = 1;
    } else if (out.compare(v, 5, "false") == 0) {
      ans.model[name] = 0;
    } else if (out.compare(v, 3, "(- ") == 0) {
      ans.model[name] = -std::atol(out.c_str() + v + 3);
    } else {
      ans.model[name] = std::atol(out.c_str() + v);
    }
    p = v;
  }
}

}  // namespace

SmtAnswer solve_smt(const std::string& script, const SmtConfig& cfg) {
  uint64_t key = fnv1a(script);
  {
    std::lock_guard<std::mutex> lock(g_mu);
    ++g_stats.queries;
    auto it = g_cache.find(key);
    if (it != g_cache.end() && it->second.first == script) {
      ++g_stats.cache_hits;
      return it->second.second;
    }
  }
  if (!cfg.emit_dir.empty()) {
    std::ofstream(cfg.emit_dir + "/" + hex64(key) + ".smt2") << script;
  }
  SmtAnswer ans;
  std::string path = write_temp_file(script, ".smt2");
  auto pr = run_process({cfg.binary, path}, cfg.timeout_s);
  std::remove(path.c_str());
  std::string first = pr.out.substr(0, pr.out.find('\n'));
  if (pr.spawn_failed) {
    ans.error = "cannot start solver '" + cfg.binary + "'";
  } else if (pr.timed_out) {
    ans.error = "solver timeout";
  } else if (first == "sat") {
    ans.result = SatResult::Sat;
    parse_model(pr.out, ans);
  } else if (first == "unsat") {
    ans.result = SatResult::Unsat;
  } else {
    ans.error = "unexpected solver output: " + first;
  }
  std::lock_guard<std::mutex> lock(g_mu);
  if (ans.result == SatResult::Unknown) {
    ++g_stats.failures;
  } else {
    g_cache[key] = {script, ans};
  }
  return ans;
}

SolverStats smt_stats() {
  std::lock_guard<std::mutex> lock(g_mu);
  return g_stats;
}

}  // namespace cssmin
