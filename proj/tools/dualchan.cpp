// Copyright 2026 The dualchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: loads channels/instances, runs the four experiment
// families and emits one JSON report on standard output. Exit codes: 0 on
// success, 1 on usage errors, 2 on validation failures.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dualchan/io.hpp"

namespace {

int resolve_workers(int cli_value) {
  if (cli_value > 0) return cli_value;
  if (const char* env = std::getenv("DUALCHAN_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return 1;
}

void emit(const dualchan::Json& j) { std::cout << j.dump(2) << std::endl; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dualchan: simulation of dual channel transformations"};
  app.require_subcommand(1);

  // gen-channel
  auto* gen = app.add_subcommand("gen-channel", "Sample a random CPTP channel and write it");
  dualchan::Index gen_din = 2, gen_dout = 2, gen_rank = 4;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--din", gen_din, "input dimension")->required();
  gen->add_option("--dout", gen_dout, "output dimension")->required();
  gen->add_option("--rank", gen_rank, "Kraus rank")->required();
  gen->add_option("--seed", gen_seed, "RNG seed")->required();
  gen->add_option("-o,--output", gen_out, "output channel file")->required();

  // transpose-sim
  auto* tsim = app.add_subcommand("transpose-sim", "Exact postselected-teleportation transpose");
  std::string tsim_channel, tsim_state;
  tsim->add_option("--channel", tsim_channel, "channel JSON file")->required();
  tsim->add_option("--state", tsim_state, "input state JSON file")->required();

  // conjugate-estimate
  auto* cest = app.add_subcommand("conjugate-estimate",
                                  "Quasi-probability estimate of tr[O N*(rho)]");
  std::string cest_channel, cest_state, cest_obs;
  double cest_eps = 0.1, cest_delta = 0.05;
  std::int64_t cest_rounds = 0;
  std::uint64_t cest_seed = 0;
  int cest_workers = 0;
  cest->add_option("--channel", cest_channel)->required();
  cest->add_option("--state", cest_state)->required();
  cest->add_option("--obs", cest_obs)->required();
  cest->add_option("--eps", cest_eps, "target precision");
  cest->add_option("--delta", cest_delta, "failure probability");
  cest->add_option("--rounds", cest_rounds, "override the Hoeffding round count");
  cest->add_option("--seed", cest_seed, "RNG seed (mandatory)")->required();
  cest->add_option("--workers", cest_workers, "parallel workers (default 1 or DUALCHAN_WORKERS)");

  // petz-estimate
  auto* pest = app.add_subcommand("petz-estimate",
                                  "Quasi-sampling estimate of tr[O Petz_{sigma,N}(omega)]");
  std::string pest_instance;
  double pest_eps = 0.1, pest_delta = 0.05;
  std::int64_t pest_attempts = 0;
  std::uint64_t pest_seed = 0;
  int pest_workers = 0;
  pest->add_option("--instance", pest_instance, "instance JSON file")->required();
  pest->add_option("--eps", pest_eps, "target precision");
  pest->add_option("--delta", pest_delta, "failure probability");
  pest->add_option("--attempts", pest_attempts, "override the attempt budget");
  pest->add_option("--seed", pest_seed, "RNG seed (mandatory)")->required();
  pest->add_option("--workers", pest_workers, "parallel workers (default 1 or DUALCHAN_WORKERS)");

  // certify-basenorm
  auto* cert = app.add_subcommand("certify-basenorm",
                                  "Verify the optimal-overhead certificates");
  dualchan::Index cert_da = 2, cert_db = 2, cert_da_max = 0, cert_db_max = 0;
  double cert_tol = 1e-9;
  cert->add_option("--da", cert_da, "input dimension (grid start)")->required();
  cert->add_option("--db", cert_db, "output dimension (grid start)")->required();
  cert->add_option("--da-max", cert_da_max, "grid end for d_A (inclusive)");
  cert->add_option("--db-max", cert_db_max, "grid end for d_B (inclusive)");
  cert->add_option("--tol", cert_tol, "feasibility tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      const auto ch = dualchan::random_channel(gen_din, gen_dout, gen_rank, gen_seed);
      dualchan::save_channel(gen_out, ch);
      dualchan::Json j;
      j["schema"] = dualchan::kSchemaTag;
      j["output"] = gen_out;
      j["d_in"] = gen_din;
      j["d_out"] = gen_dout;
      j["kraus_rank"] = gen_rank;
      j["seed"] = gen_seed;
      emit(j);
    } else if (tsim->parsed()) {
      const auto ch = dualchan::load_channel(tsim_channel);
      const auto rho = dualchan::load_density(tsim_state);
      emit(dualchan::report_to_json(dualchan::simulate_transpose(ch, rho)));
    } else if (cest->parsed()) {
      const auto ch = dualchan::load_channel(cest_channel);
      const auto rho = dualchan::load_density(cest_state);
      const auto obs = dualchan::load_observable(cest_obs);
      obs.require_unit_bounded();
      std::int64_t rounds = cest_rounds;
      if (rounds <= 0)
        rounds = dualchan::hoeffding_rounds(cest_eps, cest_delta,
                                            dualchan::quasiprob_gamma(ch.d_in, ch.d_out));
      emit(dualchan::report_to_json(dualchan::estimate_conjugate(
          ch, rho, obs, rounds, cest_seed, resolve_workers(cest_workers))));
    } else if (pest->parsed()) {
      const auto inst = dualchan::load_petz_instance(pest_instance);
      const int workers = resolve_workers(pest_workers);
      const auto rep =
          pest_attempts > 0
              ? dualchan::estimate_petz_attempts(inst, pest_attempts, pest_seed, workers)
              : dualchan::estimate_petz(inst, pest_eps, pest_delta, pest_seed, workers);
      emit(dualchan::report_to_json(rep));
    } else if (cert->parsed()) {
      const dualchan::Index da_end = cert_da_max > 0 ? cert_da_max : cert_da;
      const dualchan::Index db_end = cert_db_max > 0 ? cert_db_max : cert_db;
      bool all_pass = true;
      dualchan::Json reports = dualchan::Json::array();
      for (dualchan::Index da = cert_da; da <= da_end; ++da)
        for (dualchan::Index db = cert_db; db <= db_end; ++db) {
          const auto rep = dualchan::certify_base_norm(da, db, cert_tol);
          all_pass = all_pass && rep.pass;
          reports.push_back(dualchan::report_to_json(rep));
        }
      if (reports.size() == 1) {
        emit(reports.front());
      } else {
        dualchan::Json j;
        j["schema"] = dualchan::kSchemaTag;
        j["reports"] = std::move(reports);
        j["pass"] = all_pass;
        emit(j);
      }
      if (!all_pass) return 2;
    }
  } catch (const std::exception& e) {
    dualchan::Json err;
    err["schema"] = dualchan::kSchemaTag;
    err["error"] = e.what();
    std::cerr << err.dump(2) << std::endl;
    return 2;
  }
  return 0;
}
