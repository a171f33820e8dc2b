// sdglens command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdglens/sdglens.h"

namespace {

const std::vector<std::string> kStages{"ingest",     "clean",      "tag",  "sentiment",
                                        "interlink", "robustness", "eval", "report"};

void log_failure(const char* event, const std::string& message) {
  // Same JSON Lines shape as the library's own log output.
  std::string escaped;
  for (char c : message) {
    if (c == '"' || c == '\\') {
      escaped += '\\';
      escaped += c;
    } else if (static_cast<unsigned char>(c) < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04x", c);
      escaped += buf;
    } else {
      escaped += c;
    }
  }
  std::fprintf(stderr, "{\"level\":\"error\",\"event\":\"%s\",\"message\":\"%s\"}\n", event, escaped.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tag policy documents with SDGs, score climate sentiment and extract SDG interlinkages."};
  app.set_version_flag("--version", std::string(sdgl_version()));
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path, strategy, backend, seed, out;
  app.add_option("--config", config_path, "Pipeline config (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--strategy", strategy, "similarity or llm")->check(CLI::IsMember({"similarity", "llm"}));
  app.add_option("--backend", backend, "mock or http")->check(CLI::IsMember({"mock", "http"}));
  app.add_option("--seed", seed, "Seed for robustness shuffles and the noise wrapper")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out, "Output directory");

  std::string gold;
  for (const auto& stage : kStages) {
    auto* sub = app.add_subcommand(stage, "Run the " + stage + " stage");
    if (stage == "eval" || stage == "report") {
      sub->add_option("--gold", gold, "Gold CSV (item_id,sdg_a,sdg_b,type)")->check(CLI::ExistingFile);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  sdgl_pipeline* pipeline = nullptr;
  if (const auto st = sdgl_pipeline_open(config_path.c_str(), &pipeline); st != SDGL_OK) {
    log_failure("config_error", sdgl_last_error());
    return st == SDGL_E_BACKEND ? 2 : 1;
  }

  const std::pair<const char*, const std::string*> options[] = {
      {"strategy", &strategy}, {"backend", &backend}, {"seed", &seed}, {"out", &out}, {"gold", &gold}};
  for (const auto& [key, value] : options) {
    if (value->empty()) continue;
    if (sdgl_pipeline_set_option(pipeline, key, value->c_str()) != SDGL_OK) {
      log_failure("option_error", sdgl_pipeline_last_error(pipeline));
      sdgl_pipeline_close(pipeline);
      return 1;
    }
  }

  int exit_code = 0;
  for (const auto* sub : app.get_subcommands()) {
    sdgl_pipeline_run(pipeline, sub->get_name().c_str(), &exit_code);
  }
  sdgl_pipeline_close(pipeline);
  return exit_code;
}
