// Copyright 2026 The DeployQA Authors.
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
#include "deployqa/zip.hpp"

#include <zlib.h>

#include <cstdint>
#include <cstring>

namespace dqa::zip {
namespace {

constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kEndSig = 0x06054b50;

std::uint32_t rd32(std::string_view b, std::size_t at) {
  if (at + 4 > b.size()) throw ZipError("truncated zip structure");
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[at])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 3])) << 24;
}

std::uint16_t rd16(std::string_view b, std::size_t at) {
  if (at + 2 > b.size()) throw ZipError("truncated zip structure");
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                    static_cast<unsigned char>(b[at + 1]) << 8);
}

void wr16(std::string& out, std::uint16_t v) {
  out += static_cast<char>(v & 0xFF);
  out += static_cast<char>(v >> 8);
}

void wr32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}

std::string inflate_raw(std::string_view data, std::size_t expected) {
  std::string out(expected, '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw ZipError("inflateInit failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&zs, Z_FINISH);
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || zs.total_out != expected) {
    throw ZipError("corrupt deflate stream");
  }
  return out;
}

}  // namespace

bool looks_like_zip(std::string_view bytes) {
  return bytes.size() >= 4 && rd32(bytes, 0) == kLocalSig;
}

std::map<std::string, std::string> read_archive(std::string_view bytes) {
  if (bytes.size() < 22) throw ZipError("not a zip archive");
  std::size_t eocd = std::string_view::npos;
  std::size_t lowest = bytes.size() > 22 + 0xFFFF ? bytes.size() - 22 - 0xFFFF : 0;
  for (std::size_t i = bytes.size() - 22 + 1; i-- > lowest;) {
    if (rd32(bytes, i) == kEndSig) {
      eocd = i;
      break;
    }
  }
  if (eocd == std::string_view::npos) throw ZipError("zip end-of-central-directory not found");
  std::uint16_t count = rd16(bytes, eocd + 10);
  std::size_t offset = rd32(bytes, eocd + 16);

  std::map<std::string, std::string> files;
  for (std::uint16_t n = 0; n < count; ++n) {
    if (rd32(bytes, offset) != kCentralSig) throw ZipError("bad central directory entry");
    std::uint16_t flags = rd16(bytes, offset + 8);
    std::uint16_t method = rd16(bytes, offset + 10);
    std::uint32_t crc = rd32(bytes, offset + 16);
    std::uint32_t csize = rd32(bytes, offset + 20);
    std::uint32_t usize = rd32(bytes, offset + 24);
    std::uint16_t name_len = rd16(bytes, offset + 28);
    std::uint16_t extra_len = rd16(bytes, offset + 30);
    std::uint16_t comment_len = rd16(bytes, offset + 32);
    std::uint32_t local = rd32(bytes, offset + 42);
    if (offset + 46 + name_len > bytes.size()) throw ZipError("truncated file name");
    std::string name(bytes.substr(offset + 46, name_len));
    offset += 46u + name_len + extra_len + comment_len;

    if (flags & 0x1) throw ZipError("encrypted zip entries are not supported: " + name);
    if (!name.empty() && name.back() == '/') continue;
    if (rd32(bytes, local) != kLocalSig) throw ZipError("bad local header for " + name);
    std::size_t data_at = local + 30u + rd16(bytes, local + 26) + rd16(bytes, local + 28);
    if (data_at + csize > bytes.size()) throw ZipError("truncated data for " + name);
    std::string_view data = bytes.substr(data_at, csize);
    std::string content;
    if (method == 0) {
      content = std::string(data);
    } else if (method == 8) {
      content = inflate_raw(data, usize);
    } else {
      throw ZipError("unsupported compression method for " + name);
    }
    auto actual = static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(content.data()), static_cast<uInt>(content.size())));
    if (actual != crc) throw ZipError("CRC mismatch for " + name);
    files[name] = std::move(content);
  }
  return files;
}

std::string write_archive(const std::map<std::string, std::string>& files) {
  std::string out;
  std::string central;
  for (const auto& [name, content] : files) {
    auto crc = static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(content.data()), static_cast<uInt>(content.size())));
    auto offset = static_cast<std::uint32_t>(out.size());
    auto size = static_cast<std::uint32_t>(content.size());
    auto name_len = static_cast<std::uint16_t>(name.size());

    wr32(out, kLocalSig);
    wr16(out, 20);
    wr16(out, 0);
    wr16(out, 0);  // stored
    wr16(out, 0);
    wr16(out, 0x21);  // 1980-01-01
    wr32(out, crc);
    wr32(out, size);
    wr32(out, size);
    wr16(out, name_len);
    wr16(out, 0);
    out += name;
    out += content;

    wr32(central, kCentralSig);
    wr16(central, 20);
    wr16(central, 20);
    wr16(central, 0);
    wr16(central, 0);
    wr16(central, 0);
    wr16(central, 0x21);
    wr32(central, crc);
    wr32(central, size);
    wr32(central, size);
    wr16(central, name_len);
    wr16(central, 0);
    wr16(central, 0);
    wr16(central, 0);
    wr16(central, 0);
    wr32(central, 0);
    wr32(central, offset);
    central += name;
  }
  auto cd_offset = static_cast<std::uint32_t>(out.size());
  out += central;
  wr32(out, kEndSig);
  wr16(out, 0);
  wr16(out, 0);
  wr16(out, static_cast<std::uint16_t>(files.size()));
  wr16(out, static_cast<std::uint16_t>(files.size()));
  wr32(out, static_cast<std::uint32_t>(central.size()));
  wr32(out, cd_offset);
  wr16(out, 0);
  return out;
}

}  // namespace dqa::zip
