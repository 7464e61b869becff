#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "loopcas/runner.hpp"

using namespace loopcas;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::BadArgument, "cannot open manifest '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int execute(Job job, const std::string& manifest_path, const std::string& out_path,
            std::optional<long> seed_override, int jobs) {
  Report rep;
  if (job == Job::Selftest && manifest_path.empty()) {
    rep = run_selftest();
  } else {
    std::string bytes = slurp(manifest_path);
    Manifest m = parse_manifest(bytes);
    if (m.job != job)
      raise(Errc::BadArgument, std::string("manifest declares job '") + job_name(m.job) +
                                   "' but the subcommand is '" + job_name(job) + "'");
    if (seed_override) m.seed = static_cast<std::uint64_t>(*seed_override);
    rep = run_job(m, jobs);
    rep.manifest_digest =
        digest_bytes(bytes) + (seed_override ? ":" + std::to_string(*seed_override) : "");
  }
  std::cout << report_to_text(rep);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) raise(Errc::BadArgument, "cannot write report to '" + out_path + "'");
    out << report_to_json(rep);
  }
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"loopcas: exact verification on formal loop spaces"};
  app.require_subcommand(1);

  std::string manifest_path, out_path;
  std::optional<long> seed;
  int jobs = 1;

  auto add_common = [&](CLI::App* sub, bool needs_manifest) {
    if (needs_manifest) sub->add_option("manifest", manifest_path, "manifest path")->required();
    sub->add_option("--out", out_path, "write the machine report to this path");
    sub->add_option("--seed", seed, "override the manifest seed");
    sub->add_option("--jobs", jobs, "worker threads for independent assertions");
  };

  std::map<std::string, Job> subs = {
      {"transgress", Job::Transgress},
      {"dinv", Job::Dinv},
      {"action", Job::Action},
      {"residue", Job::Residue},
      {"verify-invariance", Job::VerifyInvariance},
      {"verify-automorphism", Job::VerifyAutomorphism},
      {"verify-factorization", Job::VerifyFactorization},
  };
  for (auto& [name, job] : subs) add_common(app.add_subcommand(name, name), true);
  auto* selftest = app.add_subcommand("selftest", "run the built-in example battery");
  add_common(selftest, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (auto& [name, job] : subs)
      if (app.got_subcommand(name)) return execute(job, manifest_path, out_path, seed, jobs);
    if (app.got_subcommand("selftest")) return execute(Job::Selftest, manifest_path, out_path, seed, jobs);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
