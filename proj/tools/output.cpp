#include "output.hpp"

#include <fstream>
#include <memory>

#include <fmt/format.h>
#include <openssl/evp.h>


namespace ratchet::cli {

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> md(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!md || EVP_DigestInit_ex(md.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(md.get(), bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(md.get(), digest, &len) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string num(double v) { return fmt::format("{}", v); }

namespace {

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace

std::filesystem::path write_output(const RunContext& ctx, const std::string& name, const std::string& content,
                                   const Json& extra) {
  std::filesystem::create_directories(ctx.out_dir);
  const auto path = ctx.out_dir / name;
  write_file(path, content);

  Json meta;
  meta["file"] = name;
  meta["sha256"] = sha256_hex(content);
  meta["command"] = to_string(ctx.command);
  meta["code_version"] = RATCHET_VERSION;
  meta["preset"] = ctx.preset.empty() ? Json() : Json(ctx.preset);
  meta["config_file"] = ctx.config_path.empty() ? Json() : Json(ctx.config_path);
  meta["parsed_config"] = ctx.parsed_config;
  meta["effective_config"] = ctx.effective_config;
  for (const auto& [k, v] : extra.items()) meta[k] = v;
  write_file(ctx.out_dir / (name + ".meta.json"), meta.dump(2) + "\n");
  return path;
}

}  // namespace ratchet::cli
