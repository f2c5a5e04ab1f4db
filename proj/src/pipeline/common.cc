// Copyright 2026 The Bitsalvage Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "bitsalvage/common/error.h"
#include "bitsalvage/common/image_io.h"
#include "pipeline/internal.h"

namespace bitsalvage::pipeline {

std::string Sha256Hex(std::span<const uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &size, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIo, "SHA-256 failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < size; ++i) {
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return out.str();
}

std::vector<uint8_t> ParseHexKey(const std::string& hex) {
  std::string digits;
  for (char c : hex) {
    if (!std::isspace(static_cast<unsigned char>(c))) digits.push_back(c);
  }
  if (digits.size() != 2 * fde::kKeySize ||
      !std::all_of(digits.begin(), digits.end(),
                   [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); })) {
    throw Error(ErrorCode::kInvalidArgument, "key must be 32 hex digits");
  }
  std::vector<uint8_t> key(fde::kKeySize);
  for (size_t i = 0; i < key.size(); ++i) {
    key[i] = static_cast<uint8_t>(std::stoi(digits.substr(2 * i, 2), nullptr, 16));
  }
  return key;
}

std::optional<uint64_t> SeedFromEnvironment() {
  const char* value = std::getenv("BITSALVAGE_SEED");
  if (value == nullptr || *value == '\0') return std::nullopt;
  try {
    size_t used = 0;
    const uint64_t seed = std::stoull(value, &used, 0);
    if (used != std::string(value).size()) throw std::invalid_argument(value);
    return seed;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("BITSALVAGE_SEED is not an integer: ") + value);
  }
}

namespace internal {

void ParallelFor(size_t count, int jobs, const std::function<void(size_t)>& fn) {
  const size_t workers = std::min(count, static_cast<size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> threads;
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (std::thread& t : threads) t.join();
}

nlohmann::json ReadJson(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedSegment, path.string() + ": " + e.what());
  }
}

void WriteJson(const fs::path& path, const nlohmann::json& doc) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

nlohmann::json ErrorJson(const std::exception& e) {
  const auto* error = dynamic_cast<const Error*>(&e);
  return {{"code", error ? std::string(ErrorCodeName(error->code())) : "Internal"},
          {"message", e.what()}};
}

namespace {

bool IsJpegPath(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".jpg" || ext == ".jpeg";
}

fs::path Resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

std::vector<BatchItem> LoadBatch(const fs::path& dir) {
  std::vector<BatchItem> items;
  const fs::path manifest = dir / "manifest.json";
  if (fs::exists(manifest)) {
    const nlohmann::json doc = ReadJson(manifest);
    for (const auto& f : doc.at("files")) {
      if (f.value("status", "ok") != "ok") continue;
      BatchItem item{f.at("name").get<std::string>(),
                     Resolve(dir, f.at("jpeg").get<std::string>()), std::nullopt};
      if (f.contains("source") && f["source"].is_string()) {
        item.original = Resolve(dir, f["source"].get<std::string>());
      }
      items.push_back(std::move(item));
    }
    return items;
  }
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kIo, dir.string() + " is not a directory");
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && IsJpegPath(entry.path())) {
      items.push_back({entry.path().stem().string(), entry.path(), std::nullopt});
    }
  }
  std::sort(items.begin(), items.end(),
            [](const BatchItem& a, const BatchItem& b) { return a.name < b.name; });
  return items;
}

std::optional<fs::path> FindOriginal(const fs::path& originals, const std::string& name) {
  if (fs::is_regular_file(originals)) {
    const nlohmann::json doc = ReadJson(originals);
    for (const auto& f : doc.at("files")) {
      if (f.at("name") == name && f.contains("source") && f["source"].is_string()) {
        return Resolve(originals.parent_path(), f["source"].get<std::string>());
      }
    }
    return std::nullopt;
  }
  for (const char* ext : {".png", ".ppm", ".pgm"}) {
    const fs::path p = originals / (name + ext);
    if (fs::exists(p)) return p;
  }
  return std::nullopt;
}

nlohmann::json MetricSummary(const nlohmann::json& files) {
  double psnr = 0.0, ssim = 0.0;
  int finite = 0, infinite = 0, evaluated = 0;
  for (const auto& f : files) {
    if (!f.contains("metrics")) continue;
    ++evaluated;
    ssim += f["metrics"]["ssim_y"].get<double>();
    if (f["metrics"]["psnr_y"].is_null()) {
      ++infinite;
    } else {
      psnr += f["metrics"]["psnr_y"].get<double>();
      ++finite;
    }
  }
  nlohmann::json s;
  s["evaluated"] = evaluated;
  s["identical"] = infinite;
  s["mean_psnr_y"] = finite > 0 ? nlohmann::json(psnr / finite) : nlohmann::json(nullptr);
  s["mean_ssim_y"] = evaluated > 0 ? nlohmann::json(ssim / evaluated) : nlohmann::json(nullptr);
  return s;
}

void WriteCsv(const fs::path& path, const nlohmann::json& files) {
  std::ofstream out(path);
  out << "name,status,psnr_y,ssim_y\n";
  out << std::setprecision(10);
  for (const auto& f : files) {
    out << f.at("name").get<std::string>() << ',' << f.value("status", "ok") << ',';
    if (f.contains("metrics")) {
      const auto& m = f["metrics"];
      if (m["psnr_y"].is_null()) {
        out << "inf";
      } else {
        out << m["psnr_y"].get<double>();
      }
      out << ',' << m["ssim_y"].get<double>();
    } else {
      out << ',';
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

}  // namespace internal
}  // namespace bitsalvage::pipeline
