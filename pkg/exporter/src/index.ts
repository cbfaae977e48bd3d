export {
  ContainerError,
  EmbeddingContainer,
  MAGIC,
  VERSION,
  decodeBinary,
  encodeBinary,
  encodeJson,
  validateContainer,
  writeContainer,
} from './container.js';
export { EncoderError, FrameEncoder, resolveEncoder } from './encoder.js';
export {
  ExportOptions,
  ExportResult,
  buildContainer,
  buildQueryText,
  decodeVideo,
  exportContainer,
} from './export.js';
export { RgbFrame, sampleOneFps, ycbcrToRgb } from './frames.js';
export { parsePpm } from './ppm.js';
export { DecodeError, DecodedVideo, parseY4m } from './y4m.js';
