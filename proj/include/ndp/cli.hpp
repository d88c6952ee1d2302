#pragma once

// Batch commands behind the ndp tool. Each returns the process exit status.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "ndp/checker.hpp"
#include "ndp/error.hpp"
#include "ndp/export.hpp"
#include "ndp/persist.hpp"
#include "ndp/script.hpp"

namespace ndp {

enum ExitStatus : int { kExitOk = 0, kExitInvalid = 1, kExitIncomplete = 2, kExitUsage = 3 };

inline int exit_status(CheckStatus s) {
  switch (s) {
    case CheckStatus::Complete: return kExitOk;
    case CheckStatus::IncompleteButSound: return kExitIncomplete;
    case CheckStatus::Invalid: return kExitInvalid;
  }
  return kExitInvalid;
}

// --system beats NDP_SYSTEM, which beats the system saved in the file.
inline std::optional<SystemProfile> requested_system(const std::optional<std::string>& flag) {
  if (flag) return system_by_name(*flag);
  if (const char* env = std::getenv("NDP_SYSTEM"); env && *env) return system_by_name(env);
  return std::nullopt;
}

inline int cmd_check(const std::filesystem::path& path, const std::optional<std::string>& system, std::ostream& out,
                     std::ostream& err) {
  ProofDocument doc;
  std::optional<SystemProfile> sys;
  try {
    sys = requested_system(system);
    doc = read_document(path);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
  ProofState state;
  try {
    state = to_state(doc);
  } catch (const Error& e) {
    out << (e.at() ? *e.at() : 0) << ":ReplayError:" << e.detail() << "\n";
    out << "Invalid\n";
    return kExitInvalid;
  }
  CheckReport report = check_proof(state.proof, sys ? *sys : doc.system);
  out << report.text() << to_string(report.status) << "\n";
  return exit_status(report.status);
}

inline bool write_file(const std::filesystem::path& path, const std::string& content, std::ostream& err) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f || !(f << content)) {
    err << "IoError: cannot write " << path.string() << "\n";
    return false;
  }
  return true;
}

// latex and text go to --out (a file) or stdout; frames go to the --out directory.
inline int cmd_export(const std::filesystem::path& path, const std::string& format,
                     const std::optional<std::filesystem::path>& out_path, std::ostream& out, std::ostream& err) {
  if (format != "latex" && format != "text" && format != "frames") {
    err << "unknown format '" << format << "'\nusage: ndp export <path> --format latex|text|frames [--out path]\n";
    return kExitUsage;
  }
  try {
    ProofDocument doc = read_document(path);
    if (format == "frames") {
      FrameSequence seq = export_frames(doc);
      std::filesystem::path dir = out_path ? *out_path : std::filesystem::path(".");
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      for (std::size_t i = 0; i < seq.frames.size(); ++i)
        if (!write_file(dir / frame_file_name(i), to_unicode(seq.frames[i]), err)) return kExitUsage;
      out << seq.frames.size() << " frames written to " << dir.string() << "\n";
      return kExitOk;
    }
    Proof proof = to_state(doc).proof;
    std::string text = format == "latex" ? export_latex(proof) : export_unicode(proof);
    if (out_path) return write_file(*out_path, text, err) ? kExitOk : kExitUsage;
    out << text;
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
}

inline std::optional<std::string> read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline int cmd_prove(const std::filesystem::path& script_path, const std::optional<std::filesystem::path>& save_path,
                     std::ostream& out, std::ostream& err) {
  auto text = read_text(script_path);
  if (!text) {
    err << "IoError: cannot read " << script_path.string() << "\n";
    return kExitUsage;
  }
  Script script;
  try {
    script = parse_script(*text);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
  ScriptOutcome result = run_script(script);
  out << export_unicode(result.state);
  if (save_path) {
    try {
      save(result.state, mode_for_path(*save_path), *save_path);
    } catch (const Error& e) {
      err << e.what() << "\n";
      return kExitUsage;
    }
  }
  if (result.error) {
    err << "step " << *result.failed_step << ": " << result.error->what() << "\n";
    return kExitInvalid;
  }
  return result.state.complete() ? kExitOk : kExitIncomplete;
}

}  // namespace ndp
