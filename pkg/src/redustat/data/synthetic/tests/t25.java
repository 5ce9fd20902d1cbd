for (String item1 : items) {
    helper2(v1);
    assertEquals(6, v2);
    values.add(10);
    int v5 = 3;
}
if (flag6) {
    assertEquals(2, v6);
}
assertEquals(6, v7);
