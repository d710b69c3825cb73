// Service endpoint configuration, stored in extension sync storage.

export const DEFAULT_ENDPOINT = "http://127.0.0.1:8532";

type StorageLike = Pick<typeof chrome.storage.sync, "get" | "set">;

export async function getEndpoint(storage?: StorageLike): Promise<string> {
  const store = storage ?? chrome.storage.sync;
  const items = await store.get({ endpoint: DEFAULT_ENDPOINT });
  const endpoint = items["endpoint"];
  return typeof endpoint === "string" && endpoint.trim() ? endpoint.trim() : DEFAULT_ENDPOINT;
}

export async function setEndpoint(endpoint: string, storage?: StorageLike): Promise<void> {
  const store = storage ?? chrome.storage.sync;
  await store.set({ endpoint: endpoint.trim() || DEFAULT_ENDPOINT });
}

export function initOptionsPage(doc: Document, storage?: StorageLike): void {
  const input = doc.getElementById("endpoint") as HTMLInputElement;
  const saveButton = doc.getElementById("save") as HTMLButtonElement;
  const status = doc.getElementById("status") as HTMLElement;
  void getEndpoint(storage).then((endpoint) => {
    input.value = endpoint;
  });
  saveButton.addEventListener("click", () => {
    void setEndpoint(input.value, storage).then(() => {
      status.textContent = "Saved.";
      setTimeout(() => {
        status.textContent = "";
      }, 1500);
    });
  });
}

if (typeof document !== "undefined" && document.getElementById("endpoint")) {
  initOptionsPage(document);
}
