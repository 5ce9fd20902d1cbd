try {
    for (String item2 : items) {
        int v3 = 38;
    }
} catch (Exception e1) {
    String s4 = builder.toString();
    assertEquals(0, v4);
}
for (int i6 = 0; i6 < 5; i6++) {
    obj.method7();
    values.add(12);
    int v9 = 76;
}
